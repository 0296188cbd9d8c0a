//! Episode-structured training: monitor-interval decisions, rewards from
//! tagged packets, replay updates.

use super::{Agent, Experience};
use crate::routing::RlNodeSet;
use crate::traffic::Simulator;

pub const N_ACTIONS: usize = crate::routing::BETA_SET.len();

/// One agent's record for one episode.
#[derive(Debug, Clone)]
pub struct EpisodeAgentRecord {
    /// Mean monitor-interval reward over the episode.
    pub reward: f64,
    pub action_counts: [u64; N_ACTIONS],
    pub directed: u64,
    pub redirected: u64,
}

/// Per-episode, per-agent training history.
#[derive(Debug, Clone, Default)]
pub struct TrainingLog {
    pub episodes: Vec<Vec<EpisodeAgentRecord>>,
}

impl TrainingLog {
    pub fn n_episodes(&self) -> usize {
        self.episodes.len()
    }

    /// Per-episode reward of one agent slot.
    pub fn rewards_of(&self, slot: usize) -> Vec<f64> {
        self.episodes.iter().map(|ep| ep[slot].reward).collect()
    }

    /// Per-episode reward averaged across agents.
    pub fn mean_rewards(&self) -> Vec<f64> {
        self.episodes
            .iter()
            .map(|ep| ep.iter().map(|r| r.reward).sum::<f64>() / ep.len() as f64)
            .collect()
    }

    /// Normalized action frequencies per agent over the last `last_n`
    /// episodes (all episodes when fewer exist).
    pub fn action_distribution(&self, last_n: usize) -> Vec<[f64; N_ACTIONS]> {
        let n_agents = self.episodes.first().map_or(0, |e| e.len());
        let start = self.episodes.len().saturating_sub(last_n);
        let mut dists = vec![[0.0; N_ACTIONS]; n_agents];
        for ep in &self.episodes[start..] {
            for (slot, rec) in ep.iter().enumerate() {
                for (a, c) in rec.action_counts.iter().enumerate() {
                    dists[slot][a] += *c as f64;
                }
            }
        }
        for d in dists.iter_mut() {
            let total: f64 = d.iter().sum();
            if total > 0.0 {
                for v in d.iter_mut() {
                    *v /= total;
                }
            }
        }
        dists
    }

    /// Raw per-agent action counts over the last `last_n` episodes.
    pub fn action_counts(&self, last_n: usize) -> Vec<[u64; N_ACTIONS]> {
        let n_agents = self.episodes.first().map_or(0, |e| e.len());
        let start = self.episodes.len().saturating_sub(last_n);
        let mut counts = vec![[0u64; N_ACTIONS]; n_agents];
        for ep in &self.episodes[start..] {
            for (slot, rec) in ep.iter().enumerate() {
                for (a, c) in rec.action_counts.iter().enumerate() {
                    counts[slot][a] += *c;
                }
            }
        }
        counts
    }

    /// Fraction of directed packets whose bypass entered another agent node,
    /// over the last `last_n` episodes.
    pub fn redirect_frequency(&self, last_n: usize) -> f64 {
        let start = self.episodes.len().saturating_sub(last_n);
        let mut directed = 0u64;
        let mut redirected = 0u64;
        for ep in &self.episodes[start..] {
            for rec in ep {
                directed += rec.directed;
                redirected += rec.redirected;
            }
        }
        if directed > 0 {
            redirected as f64 / directed as f64
        } else {
            0.0
        }
    }
}

/// Build an agent's state observation: its own normalized queue length,
/// plus the other agents' queue lengths when peer observation is on.
pub fn observe(sim: &Simulator, slot: usize, peer_queues: bool) -> Vec<f64> {
    let k = sim.rl_set().len();
    let mut state = Vec::with_capacity(if peer_queues { k } else { 1 });
    state.push(sim.agent_queue_obs(slot));
    if peer_queues {
        for other in 0..k {
            if other != slot {
                state.push(sim.agent_queue_obs(other));
            }
        }
    }
    state
}

/// Input dimension matching [`observe`].
pub fn input_dim(rl: &RlNodeSet, peer_queues: bool) -> usize {
    if peer_queues {
        rl.len().max(1)
    } else {
        1
    }
}

/// Train for `episodes` episodes. Each episode restarts the traffic
/// (weights and replay persist) and runs `mis_per_episode` monitor
/// intervals: observe, act, simulate, reward, store, train.
pub fn episode_loop(sim: &mut Simulator, agents: &mut [Agent], episodes: usize) -> TrainingLog {
    episode_loop_with_hook(sim, agents, episodes, |_, _| {})
}

/// Same as [`episode_loop`] with a hook called after each completed episode
/// (used by the link-removal experiment to damage the network mid-training).
pub fn episode_loop_with_hook(
    sim: &mut Simulator,
    agents: &mut [Agent],
    episodes: usize,
    mut after_episode: impl FnMut(usize, &mut Simulator),
) -> TrainingLog {
    let k = agents.len();
    assert_eq!(k, sim.rl_set().len(), "one agent per RL node");
    let mis = sim.config().mis_per_episode;
    let peer = agents.first().map_or(false, |a| a.config().peer_queues);
    let mut log = TrainingLog::default();

    for episode in 0..episodes {
        sim.reset_traffic();
        let mut states: Vec<Vec<f64>> = (0..k).map(|s| observe(sim, s, peer)).collect();
        let mut records: Vec<EpisodeAgentRecord> = (0..k)
            .map(|_| EpisodeAgentRecord {
                reward: 0.0,
                action_counts: [0; N_ACTIONS],
                directed: 0,
                redirected: 0,
            })
            .collect();
        let mut actions = vec![0usize; k];

        for _ in 0..mis {
            for slot in 0..k {
                let eps = agents[slot].config().epsilon(episode);
                let a = agents[slot].act(&states[slot], eps);
                actions[slot] = a;
                records[slot].action_counts[a] += 1;
                sim.set_action(slot, a);
            }
            let mi = sim.run_mi();
            for slot in 0..k {
                let next_state = observe(sim, slot, peer);
                let reward = mi[slot].reward();
                records[slot].reward += reward / mis as f64;
                records[slot].directed += mi[slot].directed;
                records[slot].redirected += mi[slot].redirected;
                agents[slot].store(Experience {
                    state: std::mem::replace(&mut states[slot], next_state),
                    action: actions[slot],
                    reward,
                    next_state: states[slot].clone(),
                });
                agents[slot].train_step();
            }
        }
        log.episodes.push(records);
        after_episode(episode, sim);
    }
    log
}
