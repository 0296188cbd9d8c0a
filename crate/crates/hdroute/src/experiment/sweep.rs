//! Capacity sweep: order parameter over the (strategy, K, R, seed) grid,
//! critical-rate extrapolation, and relative capacity gains.

use super::config::ScenarioConfig;
use super::csvout::write_csv;
use super::runner::{build_contexts, cell_eta, SeedContext};
use crate::error::Result;
use crate::traffic::{estimate_rc, Strategy};

#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub strategy: Strategy,
    pub k: usize,
    pub r_over_n: f64,
    pub seed: u64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct RcRow {
    pub strategy: Strategy,
    pub k: usize,
    pub rc_over_n: f64,
    /// Relative increase over the shortest-path baseline of the same
    /// instance set; `None` when no baseline was swept.
    pub delta_rc: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub rc: Vec<RcRow>,
}

#[derive(Debug, Clone, Copy)]
struct CellDesc {
    strategy: Strategy,
    k: usize,
    r_over_n: f64,
    ctx_idx: usize,
}

pub fn run_capacity_sweep(cfg: &ScenarioConfig) -> Result<SweepResult> {
    let contexts = build_contexts(cfg)?;
    let mut cells = Vec::new();
    for &strategy in &cfg.strategies {
        let ks: Vec<usize> = match strategy {
            Strategy::Hd => cfg.k_list.clone(),
            _ => vec![0],
        };
        for &k in &ks {
            for &r in &cfg.r_over_n {
                for ctx_idx in 0..contexts.len() {
                    cells.push(CellDesc {
                        strategy,
                        k,
                        r_over_n: r,
                        ctx_idx,
                    });
                }
            }
        }
    }

    let etas = run_cells(cfg, &contexts, &cells)?;
    let rows: Vec<SweepRow> = cells
        .iter()
        .zip(&etas)
        .map(|(c, &eta)| SweepRow {
            strategy: c.strategy,
            k: c.k,
            r_over_n: c.r_over_n,
            seed: contexts[c.ctx_idx].gen_seed,
            eta,
        })
        .collect();

    let rc = estimate_all_rc(cfg, &rows);
    Ok(SweepResult { rows, rc })
}

#[cfg(feature = "parallel")]
fn run_cells(
    cfg: &ScenarioConfig,
    contexts: &[SeedContext],
    cells: &[CellDesc],
) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    cells
        .par_iter()
        .map(|c| cell_eta(cfg, &contexts[c.ctx_idx], c.strategy, c.k, c.r_over_n))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_cells(
    cfg: &ScenarioConfig,
    contexts: &[SeedContext],
    cells: &[CellDesc],
) -> Result<Vec<f64>> {
    cells
        .iter()
        .map(|c| cell_eta(cfg, &contexts[c.ctx_idx], c.strategy, c.k, c.r_over_n))
        .collect()
}

/// Seed-averaged eta curves per (strategy, K), extrapolated to R_c.
fn estimate_all_rc(cfg: &ScenarioConfig, rows: &[SweepRow]) -> Vec<RcRow> {
    let mut groups: Vec<(Strategy, usize)> = Vec::new();
    for row in rows {
        if !groups.contains(&(row.strategy, row.k)) {
            groups.push((row.strategy, row.k));
        }
    }
    let curve = |strategy: Strategy, k: usize| -> Vec<(f64, f64)> {
        cfg.r_over_n
            .iter()
            .map(|&r| {
                let pts: Vec<f64> = rows
                    .iter()
                    .filter(|w| {
                        w.strategy == strategy && w.k == k && w.r_over_n == r
                    })
                    .map(|w| w.eta)
                    .collect();
                (r, pts.iter().sum::<f64>() / pts.len().max(1) as f64)
            })
            .collect()
    };

    let sp_rc = if rows.iter().any(|w| w.strategy == Strategy::Sp) {
        estimate_rc(&curve(Strategy::Sp, 0), cfg.eta_threshold, cfg.eta_fit_max).ok()
    } else {
        None
    };

    let mut out = Vec::new();
    for (strategy, k) in groups {
        let Ok(rc) = estimate_rc(&curve(strategy, k), cfg.eta_threshold, cfg.eta_fit_max) else {
            continue; // entire branch free-flow or degenerate: no R_c row
        };
        let delta = sp_rc.map(|base| (rc - base) / base);
        out.push(RcRow {
            strategy,
            k,
            rc_over_n: rc,
            delta_rc: delta,
        });
    }
    out
}

impl SweepResult {
    pub fn rc_of(&self, strategy: Strategy, k: usize) -> Option<f64> {
        self.rc
            .iter()
            .find(|r| r.strategy == strategy && r.k == k)
            .map(|r| r.rc_over_n)
    }

    /// Write `sweep.csv` and `rc.csv` under the scenario output directory.
    pub fn write(&self, cfg: &ScenarioConfig) -> Result<()> {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{}",
                    r.strategy.name(),
                    r.k,
                    r.r_over_n,
                    r.seed,
                    r.eta
                )
            })
            .collect();
        write_csv(
            &cfg.out_dir.join("sweep.csv"),
            cfg,
            "strategy,k,r_over_n,seed,eta",
            &rows,
        )?;
        let rc_rows: Vec<String> = self
            .rc
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{}",
                    r.strategy.name(),
                    r.k,
                    r.rc_over_n,
                    r.delta_rc.map_or(String::new(), |d| d.to_string())
                )
            })
            .collect();
        write_csv(
            &cfg.out_dir.join("rc.csv"),
            cfg,
            "strategy,k,rc_over_n,delta_rc",
            &rc_rows,
        )
    }
}
