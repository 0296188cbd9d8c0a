//! Distribution reports: packet travel-time histograms per strategy and the
//! cumulative-loss-versus-betweenness profile at a snapshot time.

use super::config::ScenarioConfig;
use super::csvout::write_csv;
use super::runner::{sim_config, train_hd_cell, SeedContext};
use crate::error::{Error, Result};
use crate::routing::RlNodeSet;
use crate::traffic::{Simulator, Strategy};
use crate::agent::observe;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct StrategyReport {
    /// "sp", "ld", or "hd_k<k>".
    pub label: String,
    pub rate: f64,
    pub travel_hist: BTreeMap<u32, u64>,
    /// `(bc_bin_low, bc_bin_high, cumulative drops)` at the snapshot time.
    pub loss_by_bc: Vec<(f64, f64, u64)>,
}

impl StrategyReport {
    pub fn mean_travel_time(&self) -> f64 {
        let total: u64 = self.travel_hist.values().sum();
        if total == 0 {
            return 0.0;
        }
        self.travel_hist
            .iter()
            .map(|(&t, &c)| t as f64 * c as f64)
            .sum::<f64>()
            / total as f64
    }
}

pub fn run_distribution_report(cfg: &ScenarioConfig) -> Result<Vec<StrategyReport>> {
    let ctx = SeedContext::build(cfg, cfg.seeds[0])?;
    let r = cfg.r_over_n[0];
    let rate = r * ctx.net.node_count() as f64;

    let mut reports = Vec::new();
    for &strategy in &cfg.strategies {
        match strategy {
            Strategy::Sp | Strategy::Ld => {
                reports.push(report_static(cfg, &ctx, strategy, r, rate)?);
            }
            Strategy::Hd => {
                for &k in &cfg.k_list {
                    if k == 0 {
                        continue;
                    }
                    reports.push(report_hd(cfg, &ctx, k, r, rate)?);
                }
            }
        }
    }
    Ok(reports)
}

fn report_static(
    cfg: &ScenarioConfig,
    ctx: &SeedContext,
    strategy: Strategy,
    r: f64,
    rate: f64,
) -> Result<StrategyReport> {
    let cell_seed = cfg.cell_seed(strategy, 0, r, ctx.gen_seed);
    let mut sim = Simulator::new(
        &ctx.net,
        &ctx.tables,
        RlNodeSet::empty(ctx.net.node_count()),
        sim_config(cfg, strategy, rate, cell_seed),
    );
    // phase 1: travel-time histogram over the measurement window
    for _ in 0..cfg.warmup + cfg.window {
        sim.step();
    }
    let travel_hist = sim.counters().travel_time_hist.clone();
    // phase 2: fresh traffic, cumulative drops at the snapshot time
    sim.reset_traffic();
    for _ in 0..cfg.snapshot_time {
        sim.step();
    }
    let loss = bin_losses(&ctx.net, &sim.counters().drop_by_node);
    Ok(StrategyReport {
        label: strategy.name().to_string(),
        rate,
        travel_hist,
        loss_by_bc: loss,
    })
}

fn report_hd(
    cfg: &ScenarioConfig,
    ctx: &SeedContext,
    k: usize,
    r: f64,
    rate: f64,
) -> Result<StrategyReport> {
    let cell_seed = cfg.cell_seed(Strategy::Hd, k, r, ctx.gen_seed);
    let (mut sim, mut agents, _log) = train_hd_cell(cfg, ctx, k, rate, cell_seed)?;
    let peer = cfg.agent.peer_queues;
    let eps = cfg.agent.eps_floor;
    let mi_len = cfg.mi_len;

    let mut drive = |sim: &mut Simulator, steps: u64| {
        let mut done = 0u64;
        while done < steps {
            for slot in 0..agents.len() {
                let state = observe(sim, slot, peer);
                let action = agents[slot].act(&state, eps);
                sim.set_action(slot, action);
            }
            for _ in 0..mi_len {
                sim.step();
                done += 1;
                if done >= steps {
                    break;
                }
            }
        }
    };

    sim.reset_traffic();
    drive(&mut sim, (cfg.warmup + cfg.window) as u64);
    let travel_hist = sim.counters().travel_time_hist.clone();
    sim.reset_traffic();
    drive(&mut sim, cfg.snapshot_time);
    let loss = bin_losses(&ctx.net, &sim.counters().drop_by_node);
    Ok(StrategyReport {
        label: format!("hd_k{k}"),
        rate,
        travel_hist,
        loss_by_bc: loss,
    })
}

/// Cumulative drops per node, grouped into 20 log-spaced bins over positive
/// normalized betweenness plus one bin for zero-BC nodes.
fn bin_losses(net: &crate::graph::Network, drops: &[u64]) -> Vec<(f64, f64, u64)> {
    let bc = net.bc();
    let lo = bc
        .iter()
        .copied()
        .filter(|&b| b > 0.0)
        .fold(f64::INFINITY, f64::min);
    let hi = bc.iter().copied().fold(0.0f64, f64::max);
    if !lo.is_finite() || hi <= 0.0 {
        let total: u64 = drops.iter().sum();
        return vec![(0.0, 0.0, total)];
    }
    let bins = 20usize;
    let lo = lo.min(hi / 2.0).max(1e-12);
    let ratio = (hi / lo).powf(1.0 / bins as f64);
    let mut edges = Vec::with_capacity(bins + 1);
    let mut e = lo;
    for _ in 0..=bins {
        edges.push(e);
        e *= ratio;
    }
    edges[bins] = hi * (1.0 + 1e-12); // half-open top edge must cover the max

    let mut out = vec![(0.0, lo, 0u64)];
    for w in edges.windows(2) {
        out.push((w[0], w[1], 0));
    }
    for (v, &d) in drops.iter().enumerate() {
        let b = bc[v];
        let idx = if b < lo {
            0
        } else {
            let mut i = ((b / lo).ln() / ratio.ln()).floor() as usize;
            if i >= bins {
                i = bins - 1;
            }
            // guard against log rounding at bin edges
            while i + 1 < bins && b >= edges[i + 1] {
                i += 1;
            }
            while i > 0 && b < edges[i] {
                i -= 1;
            }
            i + 1
        };
        out[idx].2 += d;
    }
    out
}

pub fn write_report(cfg: &ScenarioConfig, reports: &[StrategyReport]) -> Result<()> {
    let mut tt = Vec::new();
    for rep in reports {
        for (&t, &count) in &rep.travel_hist {
            tt.push(format!("{},{},{},{}", rep.label, rep.rate, t, count));
        }
    }
    write_csv(
        &cfg.out_dir.join("traveltime.csv"),
        cfg,
        "strategy,R,T,count",
        &tt,
    )?;
    for rep in reports {
        let rows: Vec<String> = rep
            .loss_by_bc
            .iter()
            .map(|(lo, hi, d)| format!("{lo},{hi},{d}"))
            .collect();
        write_csv(
            &cfg.out_dir.join(format!("loss_by_bc_{}.csv", rep.label)),
            cfg,
            "bc_bin_low,bc_bin_high,cum_dropped",
            &rows,
        )?;
    }
    Ok(())
}

/// Per-run time series for the smallest scenarios (`t,W,in_transit,
/// delivered,dropped`), used by the determinism checks and handy for
/// eyeballing a run.
pub fn write_timeseries(cfg: &ScenarioConfig, steps: usize) -> Result<()> {
    let ctx = SeedContext::build(cfg, cfg.seeds[0])?;
    let r = cfg.r_over_n[0];
    let rate = r * ctx.net.node_count() as f64;
    let strategy = cfg.strategies[0];
    if strategy == Strategy::Hd {
        return Err(Error::Config(
            "timeseries emission covers the agent-free strategies".into(),
        ));
    }
    let cell_seed = cfg.cell_seed(strategy, 0, r, ctx.gen_seed);
    let mut sim = Simulator::new(
        &ctx.net,
        &ctx.tables,
        RlNodeSet::empty(ctx.net.node_count()),
        sim_config(cfg, strategy, rate, cell_seed),
    );
    let mut rows = Vec::with_capacity(steps);
    for _ in 0..steps {
        let s = sim.step();
        rows.push(format!(
            "{},{},{},{},{}",
            s.time, s.w, s.in_transit, s.delivered, s.dropped
        ));
    }
    write_csv(
        &cfg.out_dir.join("timeseries.csv"),
        cfg,
        "t,W,in_transit,delivered,dropped",
        &rows,
    )
}
