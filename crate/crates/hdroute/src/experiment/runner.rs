//! Shared cell machinery: build per-seed topology contexts, train
//! hierarchical agents, and measure the order parameter for each strategy.

use super::config::ScenarioConfig;
use crate::agent::{episode_loop, input_dim, observe, Agent, TrainingLog, N_ACTIONS};
use crate::error::Result;
use crate::graph::Network;
use crate::routing::{select_rl_nodes, RlNodeSet, RoutingTables, BETA_SET};
use crate::traffic::{measure_eta, slope_per_rate, SimConfig, Simulator, Strategy};

/// One topology instance with its routing tables, shared read-only by every
/// cell of the same generation seed.
pub struct SeedContext {
    pub gen_seed: u64,
    pub net: Network,
    pub tables: RoutingTables,
}

impl SeedContext {
    pub fn build(cfg: &ScenarioConfig, gen_seed: u64) -> Result<SeedContext> {
        let net = cfg.build_network(gen_seed)?;
        let tables = RoutingTables::build(&net, &BETA_SET);
        Ok(SeedContext {
            gen_seed,
            net,
            tables,
        })
    }
}

/// Build all configured seed contexts.
pub fn build_contexts(cfg: &ScenarioConfig) -> Result<Vec<SeedContext>> {
    cfg.seeds
        .iter()
        .map(|&s| SeedContext::build(cfg, s))
        .collect()
}

pub fn sim_config(cfg: &ScenarioConfig, strategy: Strategy, rate: f64, seed: u64) -> SimConfig {
    SimConfig {
        rate,
        buffer: cfg.buffer,
        mi_len: cfg.mi_len,
        mis_per_episode: cfg.mis_per_episode,
        strategy,
        seed,
        generate_first: cfg.generate_first,
    }
}

/// Fresh agents for an RL node set, with streams derived from the cell seed.
pub fn spawn_agents(cfg: &ScenarioConfig, rl: &RlNodeSet, cell_seed: u64) -> Vec<Agent> {
    let dim = input_dim(rl, cfg.agent.peer_queues);
    rl.nodes()
        .iter()
        .map(|&node| Agent::new(node, dim, N_ACTIONS, cfg.agent.clone(), cell_seed))
        .collect()
}

/// Train a hierarchical cell from scratch and return the simulator, agents
/// and training log, ready for measurement.
pub fn train_hd_cell<'a>(
    cfg: &ScenarioConfig,
    ctx: &'a SeedContext,
    k: usize,
    rate: f64,
    cell_seed: u64,
) -> Result<(Simulator<'a>, Vec<Agent>, TrainingLog)> {
    let rl = select_rl_nodes(&ctx.net, k)?;
    let mut agents = spawn_agents(cfg, &rl, cell_seed);
    let mut sim = Simulator::new(
        &ctx.net,
        &ctx.tables,
        rl,
        sim_config(cfg, Strategy::Hd, rate, cell_seed),
    );
    let log = episode_loop(&mut sim, &mut agents, cfg.episodes);
    Ok((sim, agents, log))
}

/// Post-training order-parameter measurement: one continuous run with
/// monitor-interval decisions at the floor exploration rate and no training.
pub fn measure_eta_hd(
    sim: &mut Simulator,
    agents: &mut [Agent],
    warmup: usize,
    window: usize,
) -> Result<f64> {
    sim.reset_traffic();
    let peer = agents.first().map_or(false, |a| a.config().peer_queues);
    let eps = agents.first().map_or(0.0, |a| a.config().eps_floor);
    let mi_len = sim.config().mi_len;
    let total = warmup + window;
    let mut w = Vec::with_capacity(total + mi_len);
    while w.len() < total {
        for slot in 0..agents.len() {
            let state = observe(sim, slot, peer);
            let action = agents[slot].act(&state, eps);
            sim.set_action(slot, action);
        }
        for _ in 0..mi_len {
            w.push(sim.step().w as f64);
        }
    }
    slope_per_rate(&w, sim.config().rate, warmup, window)
}

/// Order parameter of one sweep cell.
pub fn cell_eta(
    cfg: &ScenarioConfig,
    ctx: &SeedContext,
    strategy: Strategy,
    k: usize,
    r_over_n: f64,
) -> Result<f64> {
    let n = ctx.net.node_count();
    let rate = r_over_n * n as f64;
    let cell_seed = cfg.cell_seed(strategy, k, r_over_n, ctx.gen_seed);
    match strategy {
        Strategy::Sp | Strategy::Ld => {
            let rl = RlNodeSet::empty(n);
            let mut sim = Simulator::new(
                &ctx.net,
                &ctx.tables,
                rl,
                sim_config(cfg, strategy, rate, cell_seed),
            );
            measure_eta(&mut sim, cfg.warmup, cfg.window)
        }
        Strategy::Hd if k == 0 => {
            // no agents: the process is exactly shortest-path traffic, and
            // the cell seed matches the SP cell, so rows coincide
            let rl = RlNodeSet::empty(n);
            let mut sim = Simulator::new(
                &ctx.net,
                &ctx.tables,
                rl,
                sim_config(cfg, Strategy::Sp, rate, cell_seed),
            );
            measure_eta(&mut sim, cfg.warmup, cfg.window)
        }
        Strategy::Hd => {
            let (mut sim, mut agents, _log) = train_hd_cell(cfg, ctx, k, rate, cell_seed)?;
            measure_eta_hd(&mut sim, &mut agents, cfg.warmup, cfg.window)
        }
    }
}
