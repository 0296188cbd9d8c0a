//! Per-node deep Q-learning: network, replay, epsilon-greedy selection and
//! the monitor-interval training loop.

mod checkpoint;
mod qnet;
mod replay;
mod training;

pub use checkpoint::{load_agents, save_agents};
pub use qnet::{Gradients, QNetwork};
pub use replay::{Experience, ReplayBuffer};
pub use training::{
    episode_loop, episode_loop_with_hook, input_dim, observe, EpisodeAgentRecord, TrainingLog,
    N_ACTIONS,
};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Hyperparameters. The defaults are the values every experiment runs with
/// unless a scenario overrides them.
#[derive(Debug, Clone)]
pub struct AgentConfig {
    pub gamma: f64,
    pub lr: f64,
    pub replay_capacity: usize,
    pub batch: usize,
    pub eps_start: f64,
    pub eps_floor: f64,
    /// Episodes over which epsilon decays linearly from start to floor.
    pub eps_decay_episodes: usize,
    /// Copy the online network into the target every this many updates.
    pub target_sync: u64,
    /// Minimum stored experiences before training starts.
    pub train_start: usize,
    pub hidden: usize,
    /// Include the other agents' queue lengths in the state.
    pub peer_queues: bool,
}

impl Default for AgentConfig {
    fn default() -> AgentConfig {
        AgentConfig {
            gamma: 0.9,
            lr: 1e-3,
            replay_capacity: 10_000,
            batch: 32,
            eps_start: 1.0,
            eps_floor: 0.05,
            eps_decay_episodes: 20,
            target_sync: 50,
            train_start: 10,
            hidden: 64,
            peer_queues: false,
        }
    }
}

impl AgentConfig {
    /// Linear epsilon schedule by episode index; hits the floor exactly at
    /// `eps_decay_episodes` and stays flat.
    pub fn epsilon(&self, episode: usize) -> f64 {
        if episode >= self.eps_decay_episodes {
            self.eps_floor
        } else {
            let t = episode as f64 / self.eps_decay_episodes as f64;
            self.eps_start - (self.eps_start - self.eps_floor) * t
        }
    }
}

/// One learning agent, owning its networks, replay buffer and RNG stream.
pub struct Agent {
    pub node: u32,
    cfg: AgentConfig,
    qnet: QNetwork,
    target: QNetwork,
    replay: ReplayBuffer,
    updates: u64,
    rng: ChaCha8Rng,
}

impl Agent {
    /// `input_dim` is 1 (own queue) or K (own plus peers). The RNG stream is
    /// derived from the master seed and the node id, so agents are
    /// independent of each other and of processing order.
    pub fn new(node: u32, input_dim: usize, n_actions: usize, cfg: AgentConfig, master_seed: u64) -> Agent {
        let mut rng = crate::rng::stream(master_seed, "agent", u64::from(node));
        let qnet = QNetwork::new(input_dim, cfg.hidden, n_actions, &mut rng);
        let target = qnet.clone();
        Agent {
            node,
            replay: ReplayBuffer::new(cfg.replay_capacity),
            qnet,
            target,
            updates: 0,
            rng,
            cfg,
        }
    }

    pub fn config(&self) -> &AgentConfig {
        &self.cfg
    }

    pub fn qnet(&self) -> &QNetwork {
        &self.qnet
    }

    pub fn qnet_mut(&mut self) -> &mut QNetwork {
        &mut self.qnet
    }

    /// Reset the target network to the online weights (used after loading a
    /// checkpoint).
    pub fn sync_target(&mut self) {
        self.target = self.qnet.clone();
    }

    pub fn replay_len(&self) -> usize {
        self.replay.len()
    }

    pub fn q_values(&self, state: &[f64]) -> Vec<f64> {
        self.qnet.forward(state).expect("state dimension fixed at construction")
    }

    /// Epsilon-greedy action: uniform with probability `eps`, otherwise the
    /// argmax of the Q-values with ties to the lowest index.
    pub fn act(&mut self, state: &[f64], eps: f64) -> usize {
        let n = self.qnet.output_dim();
        if eps > 0.0 && self.rng.gen::<f64>() < eps {
            return self.rng.gen_range(0..n);
        }
        let q = self.q_values(state);
        let mut best = 0;
        for (i, v) in q.iter().enumerate().skip(1) {
            if *v > q[best] {
                best = i;
            }
        }
        best
    }

    pub fn store(&mut self, exp: Experience) {
        debug_assert!(
            (-2.0..=0.0).contains(&exp.reward),
            "reward {} outside [-2, 0]",
            exp.reward
        );
        self.replay.push(exp);
    }

    /// One uniform-batch gradient step on the TD error against the target
    /// network. No-op (None) until `train_start` experiences are stored.
    pub fn train_step(&mut self) -> Option<f64> {
        if self.replay.len() < self.cfg.train_start {
            return None;
        }
        let batch = self.cfg.batch;
        let mut grads = Gradients::zeros_like(&self.qnet);
        let mut loss = 0.0;
        let scale = 1.0 / batch as f64;
        for _ in 0..batch {
            let exp = self.replay.sample_one(&mut self.rng);
            let target_q = self
                .target
                .forward(&exp.next_state)
                .expect("replay state dims fixed");
            let max_next = target_q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let y = exp.reward + self.cfg.gamma * max_next;
            loss += scale
                * self
                    .qnet
                    .accumulate_td_gradient(&exp.state, exp.action, y, scale, &mut grads);
        }
        self.qnet.apply_gradients(&grads, self.cfg.lr);
        self.updates += 1;
        if self.updates % self.cfg.target_sync == 0 {
            self.target = self.qnet.clone();
        }
        Some(loss)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_q_agent(q: &[f64]) -> Agent {
        // zero hidden weights and output bias set to the wanted Q-values
        // make the output independent of the state
        let mut agent = Agent::new(0, 1, q.len(), AgentConfig::default(), 1);
        for l in agent.qnet.layers.iter_mut() {
            l.w.fill(0.0);
            l.b.fill(0.0);
        }
        agent.qnet.layers[2].b.copy_from_slice(q);
        agent.sync_target();
        agent
    }

    #[test]
    fn greedy_picks_unique_max() {
        let mut agent = constant_q_agent(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        for _ in 0..100 {
            assert_eq!(agent.act(&[0.5], 0.0), 1);
        }
    }

    #[test]
    fn greedy_breaks_ties_to_lowest_index() {
        let mut agent = constant_q_agent(&[0.7, 0.7, 0.7, 0.1, 0.1, 0.1, 0.1]);
        assert_eq!(agent.act(&[0.0], 0.0), 0);
    }

    #[test]
    fn full_exploration_is_uniform() {
        let mut agent = constant_q_agent(&[0.0; 7]);
        let draws = 100_000;
        let mut counts = [0usize; 7];
        for _ in 0..draws {
            counts[agent.act(&[0.0], 1.0)] += 1;
        }
        for c in counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 1.0 / 7.0).abs() < 0.02, "freq {freq}");
        }
    }

    #[test]
    fn half_exploration_mixture_frequency() {
        // unique max at index 2: P(pick 2) = 0.5 + 0.5/7
        let mut agent = constant_q_agent(&[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let draws = 100_000;
        let mut hits = 0usize;
        for _ in 0..draws {
            if agent.act(&[0.0], 0.5) == 2 {
                hits += 1;
            }
        }
        let freq = hits as f64 / draws as f64;
        let expect = 0.5 + 0.5 / 7.0;
        assert!((freq - expect).abs() < 0.02, "freq {freq} vs {expect}");
    }

    #[test]
    fn epsilon_schedule_is_nonincreasing_and_floors_on_time() {
        let cfg = AgentConfig::default();
        let mut prev = f64::INFINITY;
        for ep in 0..40 {
            let e = cfg.epsilon(ep);
            assert!(e <= prev);
            assert!((cfg.eps_floor..=cfg.eps_start).contains(&e));
            prev = e;
        }
        assert_eq!(cfg.epsilon(cfg.eps_decay_episodes), cfg.eps_floor);
        assert!(cfg.epsilon(cfg.eps_decay_episodes - 1) > cfg.eps_floor);
    }

    #[test]
    fn gamma_zero_regression_converges_to_reward() {
        // a single repeated experience reduces the TD step to supervised
        // regression of Q(s, a) onto r
        let cfg = AgentConfig {
            gamma: 0.0,
            train_start: 1,
            ..AgentConfig::default()
        };
        let mut agent = Agent::new(0, 1, 7, cfg, 5);
        let exp = Experience {
            state: vec![0.4],
            action: 3,
            reward: -0.75,
            next_state: vec![0.4],
        };
        agent.store(exp);
        for _ in 0..2000 {
            let loss = agent.train_step().unwrap();
            assert!(loss >= 0.0);
        }
        let q = agent.q_values(&[0.4]);
        assert!(
            (q[3] - (-0.75)).abs() < 1e-2,
            "Q(s,a)={} should approach -0.75",
            q[3]
        );
    }

    #[test]
    fn contextual_bandit_finds_best_action_in_both_states() {
        // two states; action 2 pays -0.1 everywhere, the rest pay -1.0
        let cfg = AgentConfig {
            gamma: 0.0,
            train_start: 10,
            ..AgentConfig::default()
        };
        let mut agent = Agent::new(0, 1, 7, cfg, 6);
        let mut rng = crate::rng::stream(77, "bandit", 0);
        for _ in 0..3000 {
            let s = if rng.gen::<bool>() { 0.0 } else { 1.0 };
            let a = rng.gen_range(0..7);
            let r = if a == 2 { -0.1 } else { -1.0 };
            agent.store(Experience {
                state: vec![s],
                action: a,
                reward: r,
                next_state: vec![s],
            });
            agent.train_step();
        }
        for s in [0.0, 1.0] {
            let q = agent.q_values(&[s]);
            let best = (0..7).max_by(|&a, &b| q[a].partial_cmp(&q[b]).unwrap()).unwrap();
            assert_eq!(best, 2, "state {s}: q = {q:?}");
        }
    }
}
