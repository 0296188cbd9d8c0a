//! Scenario runner: figure-for-figure experiment recipes, parameter sweeps,
//! seeding and CSV emission.

mod census;
mod config;
mod csvout;
mod report;
mod resilience;
mod runner;
mod sweep;

pub use census::{run_action_census, write_census, CensusRow};
pub use config::{NetworkChoice, ScenarioConfig};
pub use csvout::write_csv;
pub use report::{run_distribution_report, write_report, write_timeseries, StrategyReport};
pub use resilience::{run_resilience, write_resilience, Arm, ResilienceResult, ARMS};
pub use runner::{
    build_contexts, cell_eta, measure_eta_hd, sim_config, spawn_agents, train_hd_cell,
    SeedContext,
};
pub use sweep::{run_capacity_sweep, RcRow, SweepResult, SweepRow};

use crate::agent::{save_agents, TrainingLog};
use crate::error::{Error, Result};
use crate::traffic::Strategy;

/// Train one hierarchical configuration (first K, first rate, first seed),
/// write the training log and a checkpoint, and return the log.
pub fn run_train(cfg: &ScenarioConfig) -> Result<TrainingLog> {
    let k = *cfg
        .k_list
        .first()
        .ok_or_else(|| Error::Config("train needs a nonempty k_list".into()))?;
    if k == 0 {
        return Err(Error::Config("train needs K >= 1".into()));
    }
    let ctx = SeedContext::build(cfg, cfg.seeds[0])?;
    let r = cfg.r_over_n[0];
    let rate = r * ctx.net.node_count() as f64;
    let cell_seed = cfg.cell_seed(Strategy::Hd, k, r, ctx.gen_seed);
    let (_sim, agents, log) = train_hd_cell(cfg, &ctx, k, rate, cell_seed)?;

    std::fs::create_dir_all(&cfg.out_dir)?;
    save_agents(cfg.out_dir.join("agents.ckpt"), &agents)?;

    let mut rows = Vec::new();
    for (ep, recs) in log.episodes.iter().enumerate() {
        for (slot, rec) in recs.iter().enumerate() {
            let actions = rec
                .action_counts
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            rows.push(format!(
                "{},{},{},{},{},{},{}",
                ep + 1,
                agents[slot].node,
                rec.reward,
                rec.directed,
                rec.redirected,
                slot,
                actions
            ));
        }
    }
    write_csv(
        &cfg.out_dir.join("training_log.csv"),
        cfg,
        "episode,node,reward,directed,redirected,slot,a0,a1,a2,a3,a4,a5,a6",
        &rows,
    )?;
    Ok(log)
}
