//! Link-removal resilience: train normally, damage the network at the end of
//! a configured episode, keep training on stale routes, and track the reward
//! dip, recovery and action redistribution.

use super::config::ScenarioConfig;
use super::csvout::write_csv;
use super::runner::{build_contexts, sim_config, spawn_agents};
use crate::agent::{episode_loop_with_hook, TrainingLog, N_ACTIONS};
use crate::error::{Error, Result};
use crate::routing::{select_rl_nodes, BETA_SET};
use crate::traffic::{RemovalMode, Simulator, Strategy};

/// Removal arm of the experiment: the no-removal control plus both modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    Control,
    Random,
    Bc,
}

impl Arm {
    pub fn name(self) -> &'static str {
        match self {
            Arm::Control => "none",
            Arm::Random => "random",
            Arm::Bc => "bc",
        }
    }

    fn removal(self) -> Option<RemovalMode> {
        match self {
            Arm::Control => None,
            Arm::Random => Some(RemovalMode::Random),
            Arm::Bc => Some(RemovalMode::Bc),
        }
    }
}

pub const ARMS: [Arm; 3] = [Arm::Control, Arm::Random, Arm::Bc];

#[derive(Debug, Clone)]
pub struct ResilienceResult {
    /// `(arm, gen_seed, training log)` for each run.
    pub runs: Vec<(Arm, u64, TrainingLog)>,
    pub removal_at_episode: usize,
}

impl ResilienceResult {
    /// Per-episode rewards (mean across agents), averaged over seeds, for
    /// one arm.
    pub fn mean_rewards(&self, arm: Arm) -> Vec<f64> {
        let logs: Vec<&TrainingLog> = self
            .runs
            .iter()
            .filter(|(a, _, _)| *a == arm)
            .map(|(_, _, l)| l)
            .collect();
        let episodes = logs.first().map_or(0, |l| l.n_episodes());
        (0..episodes)
            .map(|ep| {
                logs.iter()
                    .map(|l| {
                        let recs = &l.episodes[ep];
                        recs.iter().map(|r| r.reward).sum::<f64>() / recs.len() as f64
                    })
                    .sum::<f64>()
                    / logs.len() as f64
            })
            .collect()
    }

    /// Top agent's P(beta = 0) over an inclusive 1-based episode range,
    /// aggregated over seeds.
    pub fn p_beta0_top_agent(&self, arm: Arm, from_ep: usize, to_ep: usize) -> f64 {
        let mut counts = [0u64; N_ACTIONS];
        for (a, _, log) in &self.runs {
            if *a != arm {
                continue;
            }
            for ep in from_ep..=to_ep.min(log.n_episodes()) {
                let rec = &log.episodes[ep - 1][0];
                for (i, c) in rec.action_counts.iter().enumerate() {
                    counts[i] += c;
                }
            }
        }
        let total: u64 = counts.iter().sum();
        if total > 0 {
            counts[0] as f64 / total as f64
        } else {
            0.0
        }
    }
}

pub fn run_resilience(cfg: &ScenarioConfig) -> Result<ResilienceResult> {
    let k = *cfg
        .k_list
        .first()
        .ok_or_else(|| Error::Config("resilience needs a nonempty k_list".into()))?;
    if k == 0 {
        return Err(Error::Config("resilience needs K >= 1".into()));
    }
    let r = cfg.r_over_n[0];
    let contexts = build_contexts(cfg)?;

    let mut runs = Vec::new();
    for &arm in &ARMS {
        for ctx in &contexts {
            let rate = r * ctx.net.node_count() as f64;
            let cell_seed = crate::rng::derive(
                cfg.cell_seed(Strategy::Hd, k, r, ctx.gen_seed),
                arm.name(),
                0,
            );
            let rl = select_rl_nodes(&ctx.net, k)?;
            let mut agents = spawn_agents(cfg, &rl, cell_seed);
            let mut sim = Simulator::new(
                &ctx.net,
                &ctx.tables,
                rl,
                sim_config(cfg, Strategy::Hd, rate, cell_seed),
            );
            let at = cfg.removal_at_episode;
            let fraction = cfg.removal_fraction;
            let mut removal_rng = crate::rng::stream(cell_seed, "removal", 0);
            let log = episode_loop_with_hook(
                &mut sim,
                &mut agents,
                cfg.episodes,
                |completed, sim: &mut Simulator| {
                    // `completed` is 0-based; damage lands at the end of the
                    // 1-based episode `at`
                    if completed + 1 == at {
                        if let Some(mode) = arm.removal() {
                            sim.remove_links(fraction, mode, &mut removal_rng)
                                .expect("valid removal fraction");
                        }
                    }
                },
            );
            runs.push((arm, ctx.gen_seed, log));
        }
    }
    Ok(ResilienceResult {
        runs,
        removal_at_episode: cfg.removal_at_episode,
    })
}

/// Trailing moving average with window 3.
fn ma3(series: &[f64]) -> Vec<f64> {
    series
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let lo = i.saturating_sub(2);
            let win = &series[lo..=i];
            win.iter().sum::<f64>() / win.len() as f64
        })
        .collect()
}

pub fn write_resilience(cfg: &ScenarioConfig, result: &ResilienceResult) -> Result<()> {
    let mut lines = Vec::new();
    for (arm, seed, log) in &result.runs {
        let rewards: Vec<f64> = log.mean_rewards();
        let smooth = ma3(&rewards);
        for (i, (r, s)) in rewards.iter().zip(&smooth).enumerate() {
            lines.push(format!("{},{},{},{},{}", arm.name(), seed, i + 1, r, s));
        }
    }
    write_csv(
        &cfg.out_dir.join("resilience.csv"),
        cfg,
        "mode,seed,episode,reward,reward_ma3",
        &lines,
    )?;

    let at = result.removal_at_episode;
    let pre = (at.saturating_sub(9).max(1), at);
    let post = (at + 1, at + 20);
    let mut pb = Vec::new();
    for &arm in &ARMS {
        for (phase, (lo, hi)) in [("pre", pre), ("post", post)] {
            let mut counts = [0u64; N_ACTIONS];
            for (a, _, log) in &result.runs {
                if *a != arm {
                    continue;
                }
                for ep in lo..=hi.min(log.n_episodes()) {
                    for (i, c) in log.episodes[ep - 1][0].action_counts.iter().enumerate() {
                        counts[i] += c;
                    }
                }
            }
            let total: u64 = counts.iter().sum::<u64>().max(1);
            for (i, &beta) in BETA_SET.iter().enumerate() {
                pb.push(format!(
                    "{},{},{},{}",
                    arm.name(),
                    phase,
                    beta,
                    counts[i] as f64 / total as f64
                ));
            }
        }
    }
    write_csv(
        &cfg.out_dir.join("resilience_pbeta.csv"),
        cfg,
        "mode,phase,beta,freq",
        &pb,
    )
}
