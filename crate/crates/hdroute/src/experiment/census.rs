//! Action census: converged per-agent action frequencies P(beta) at each
//! configured generation rate.

use super::config::ScenarioConfig;
use super::csvout::write_csv;
use super::runner::{build_contexts, train_hd_cell, SeedContext};
use crate::error::{Error, Result};
use crate::routing::BETA_SET;
use crate::agent::N_ACTIONS;
use crate::traffic::Strategy;

#[derive(Debug, Clone, Copy)]
pub struct CensusRow {
    /// Node id of the agent slot in the first generation seed; slots are
    /// ranked by betweenness, which is how distributions are aggregated
    /// across seeds.
    pub node: u32,
    pub slot: usize,
    pub r_over_n: f64,
    pub beta: f64,
    pub freq: f64,
}

pub fn run_action_census(cfg: &ScenarioConfig) -> Result<Vec<CensusRow>> {
    let k = *cfg
        .k_list
        .first()
        .ok_or_else(|| Error::Config("census needs a nonempty k_list".into()))?;
    if k == 0 {
        return Err(Error::Config("census needs K >= 1".into()));
    }
    let contexts = build_contexts(cfg)?;

    let mut rows = Vec::new();
    for &r in &cfg.r_over_n {
        let per_seed = census_counts(cfg, &contexts, k, r)?;
        // sum raw counts across seeds, slot by slot
        let mut counts = vec![[0u64; N_ACTIONS]; k];
        for seed_counts in &per_seed {
            for (slot, c) in seed_counts.iter().enumerate() {
                for a in 0..N_ACTIONS {
                    counts[slot][a] += c[a];
                }
            }
        }
        let first_nodes = rl_nodes_of(&contexts[0], k)?;
        for slot in 0..k {
            let total: u64 = counts[slot].iter().sum();
            for (a, &beta) in BETA_SET.iter().enumerate() {
                let freq = if total > 0 {
                    counts[slot][a] as f64 / total as f64
                } else {
                    0.0
                };
                rows.push(CensusRow {
                    node: first_nodes[slot],
                    slot,
                    r_over_n: r,
                    beta,
                    freq,
                });
            }
        }
    }
    Ok(rows)
}

fn rl_nodes_of(ctx: &SeedContext, k: usize) -> Result<Vec<u32>> {
    Ok(crate::routing::select_rl_nodes(&ctx.net, k)?.nodes().to_vec())
}

#[cfg(feature = "parallel")]
fn census_counts(
    cfg: &ScenarioConfig,
    contexts: &[SeedContext],
    k: usize,
    r: f64,
) -> Result<Vec<Vec<[u64; N_ACTIONS]>>> {
    use rayon::prelude::*;
    contexts
        .par_iter()
        .map(|ctx| one_seed_counts(cfg, ctx, k, r))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn census_counts(
    cfg: &ScenarioConfig,
    contexts: &[SeedContext],
    k: usize,
    r: f64,
) -> Result<Vec<Vec<[u64; N_ACTIONS]>>> {
    contexts
        .iter()
        .map(|ctx| one_seed_counts(cfg, ctx, k, r))
        .collect()
}

fn one_seed_counts(
    cfg: &ScenarioConfig,
    ctx: &SeedContext,
    k: usize,
    r: f64,
) -> Result<Vec<[u64; N_ACTIONS]>> {
    let rate = r * ctx.net.node_count() as f64;
    let cell_seed = cfg.cell_seed(Strategy::Hd, k, r, ctx.gen_seed);
    let (_sim, _agents, log) = train_hd_cell(cfg, ctx, k, rate, cell_seed)?;
    Ok(log.action_counts(cfg.last_n_episodes))
}

pub fn write_census(cfg: &ScenarioConfig, rows: &[CensusRow]) -> Result<()> {
    let lines: Vec<String> = rows
        .iter()
        .map(|r| format!("{},{},{},{}", r.node, r.r_over_n, r.beta, r.freq))
        .collect();
    write_csv(
        &cfg.out_dir.join("actions.csv"),
        cfg,
        "node,R_over_N,beta,freq",
        &lines,
    )
}
