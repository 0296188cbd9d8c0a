//! Discrete-time packet simulator: generation, FIFO queueing, forwarding,
//! dropping, delivery, and the per-monitor-interval statistics that feed the
//! learning agents.

mod metrics;
mod removal;

pub use metrics::{estimate_rc, measure_eta, slope_per_rate};
pub use removal::RemovalMode;

use crate::graph::Network;
use crate::routing::{designated_bypass, RlNodeSet, RoutingTables};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashSet, VecDeque};

/// Routing strategy for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Uniformly sampled shortest paths.
    Sp,
    /// Static least-degree paths for every packet.
    Ld,
    /// Shortest paths plus agent-selected beta-bypasses around the
    /// designated high-betweenness node.
    Hd,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Sp => "sp",
            Strategy::Ld => "ld",
            Strategy::Hd => "hd",
        }
    }
}

/// Simulation parameters. `rate` may be fractional: `floor(rate)` packets
/// per step plus one Bernoulli(frac) packet.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub rate: f64,
    pub buffer: usize,
    pub mi_len: usize,
    pub mis_per_episode: usize,
    pub strategy: Strategy,
    pub seed: u64,
    /// Generation happens before forwarding within a step (the documented
    /// default); flip to generate after forwarding instead.
    pub generate_first: bool,
}

impl SimConfig {
    pub fn new(strategy: Strategy, rate: f64, seed: u64) -> SimConfig {
        SimConfig {
            rate,
            buffer: 40,
            mi_len: 10,
            mis_per_episode: 50,
            strategy,
            seed,
            generate_first: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BypassState {
    None,
    Pending { node: u32 },
    Taken,
}

#[derive(Debug, Clone)]
struct Packet {
    dest: u32,
    route: Vec<u32>,
    /// Index into `route` of the next hop; the current node is the entry
    /// before it.
    next_idx: usize,
    bypass: BypassState,
    agent_slot: Option<u16>,
    created_at: u64,
    sp_len: u32,
}

/// Cumulative traffic counters. Packet conservation
/// (`generated = delivered + dropped + in_transit`) holds after every step.
#[derive(Debug, Clone, Default)]
pub struct TrafficCounters {
    pub generated: u64,
    pub delivered: u64,
    pub dropped_overflow: u64,
    pub dropped_missing_link: u64,
    pub in_transit: u64,
    pub drop_by_node: Vec<u64>,
    pub travel_time_hist: BTreeMap<u32, u64>,
    /// Bypass decisions taken (any beta).
    pub bypass_decisions: u64,
    /// Decisions whose replacement path runs through another agent node.
    pub redirects_to_rl: u64,
}

impl TrafficCounters {
    pub fn dropped_total(&self) -> u64 {
        self.dropped_overflow + self.dropped_missing_link
    }

    /// `W(t)`: in-transit plus cumulative dropped.
    pub fn w(&self) -> u64 {
        self.in_transit + self.dropped_total()
    }
}

/// One step's event summary.
#[derive(Debug, Clone, Copy)]
pub struct StepSummary {
    pub time: u64,
    pub generated: u64,
    pub delivered: u64,
    pub dropped: u64,
    pub in_transit: u64,
    pub w: u64,
}

/// Per-agent statistics accumulated over one monitor interval.
#[derive(Debug, Clone, Copy, Default)]
pub struct MiAgentStats {
    pub delivered: u64,
    pub dropped: u64,
    /// Sum over delivered tagged packets of `min(1, T / (sp_len * B))`.
    pub sum_scaled_travel: f64,
    pub directed: u64,
    pub redirected: u64,
}

impl MiAgentStats {
    /// Mean scaled travel time of tagged packets delivered this MI
    /// (0 when none were delivered).
    pub fn travel_term(&self) -> f64 {
        if self.delivered > 0 {
            self.sum_scaled_travel / self.delivered as f64
        } else {
            0.0
        }
    }

    /// Tagged drop rate this MI (0 when nothing resolved).
    pub fn drop_rate(&self) -> f64 {
        let resolved = self.delivered + self.dropped;
        if resolved > 0 {
            self.dropped as f64 / resolved as f64
        } else {
            0.0
        }
    }

    /// `reward = -<scaled travel time> - <drop rate>`, in `[-2, 0]`.
    pub fn reward(&self) -> f64 {
        -self.travel_term() - self.drop_rate()
    }
}

/// The simulator. Strictly single-threaded and deterministic per seed; all
/// randomness comes from one ChaCha stream derived from the config seed.
pub struct Simulator<'a> {
    net: &'a Network,
    tables: &'a RoutingTables,
    rl: RlNodeSet,
    cfg: SimConfig,
    queues: Vec<VecDeque<Packet>>,
    counters: TrafficCounters,
    time: u64,
    rng: ChaCha8Rng,
    visit_order: Vec<u32>,
    /// Current per-slot beta action, frozen for each monitor interval.
    actions: Vec<usize>,
    /// Test/ablation hook: force every decision to this beta index.
    pinned_action: Option<usize>,
    removed: HashSet<(u32, u32)>,
    mi_stats: Vec<MiAgentStats>,
}

impl<'a> Simulator<'a> {
    pub fn new(
        net: &'a Network,
        tables: &'a RoutingTables,
        rl: RlNodeSet,
        cfg: SimConfig,
    ) -> Simulator<'a> {
        let n = net.node_count();
        let k = rl.len();
        Simulator {
            net,
            tables,
            rl,
            queues: vec![VecDeque::new(); n],
            counters: TrafficCounters {
                drop_by_node: vec![0; n],
                ..TrafficCounters::default()
            },
            time: 0,
            rng: crate::rng::stream(cfg.seed, "traffic", 0),
            visit_order: (0..n as u32).collect(),
            actions: vec![0; k],
            pinned_action: None,
            removed: HashSet::new(),
            mi_stats: vec![MiAgentStats::default(); k],
            cfg,
        }
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn counters(&self) -> &TrafficCounters {
        &self.counters
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn rl_set(&self) -> &RlNodeSet {
        &self.rl
    }

    pub fn queue_len(&self, node: u32) -> usize {
        self.queues[node as usize].len()
    }

    /// Normalized queue length of an agent slot's node, in `[0, 1]`.
    pub fn agent_queue_obs(&self, slot: usize) -> f64 {
        self.queue_len(self.rl.node_at(slot)) as f64 / self.cfg.buffer as f64
    }

    pub fn set_action(&mut self, slot: usize, beta_idx: usize) {
        self.actions[slot] = beta_idx;
    }

    pub fn pin_actions(&mut self, beta_idx: Option<usize>) {
        self.pinned_action = beta_idx;
    }

    /// Clear queues, counters and the clock for a fresh episode. The RNG
    /// stream continues and removed links stay removed.
    pub fn reset_traffic(&mut self) {
        for q in &mut self.queues {
            q.clear();
        }
        let n = self.net.node_count();
        self.counters = TrafficCounters {
            drop_by_node: vec![0; n],
            ..TrafficCounters::default()
        };
        self.time = 0;
        for s in &mut self.mi_stats {
            *s = MiAgentStats::default();
        }
    }

    /// Advance one time step: generation phase, then forwarding phase (order
    /// per config), then counter updates.
    pub fn step(&mut self) -> StepSummary {
        self.time += 1;
        if self.cfg.generate_first {
            self.generate_phase();
            self.forward_phase();
        } else {
            self.forward_phase();
            self.generate_phase();
        }
        debug_assert_eq!(
            self.counters.generated,
            self.counters.delivered + self.counters.dropped_total() + self.counters.in_transit,
            "packet conservation violated at t={}",
            self.time
        );
        StepSummary {
            time: self.time,
            generated: self.counters.generated,
            delivered: self.counters.delivered,
            dropped: self.counters.dropped_total(),
            in_transit: self.counters.in_transit,
            w: self.counters.w(),
        }
    }

    /// Run one monitor interval (`mi_len` steps) with the current actions
    /// and return the per-agent statistics accumulated during it.
    pub fn run_mi(&mut self) -> Vec<MiAgentStats> {
        for s in &mut self.mi_stats {
            *s = MiAgentStats::default();
        }
        for _ in 0..self.cfg.mi_len {
            self.step();
        }
        self.mi_stats.clone()
    }

    /// Remove a fraction of the live links. Routing tables are not rebuilt;
    /// packets forwarded over a removed link are dropped. Returns the
    /// removed edges.
    pub fn remove_links(
        &mut self,
        fraction: f64,
        mode: RemovalMode,
        rng: &mut impl Rng,
    ) -> crate::Result<Vec<(u32, u32)>> {
        let picked = removal::pick_edges(self.net, &self.removed, fraction, mode, rng)?;
        for &e in &picked {
            self.removed.insert(e);
        }
        Ok(picked)
    }

    pub fn removed_links(&self) -> &HashSet<(u32, u32)> {
        &self.removed
    }

    fn link_removed(&self, u: u32, v: u32) -> bool {
        !self.removed.is_empty() && self.removed.contains(&(u.min(v), u.max(v)))
    }

    fn generate_phase(&mut self) {
        let n = self.net.node_count() as u32;
        let whole = self.cfg.rate.floor() as u64;
        let frac = self.cfg.rate - self.cfg.rate.floor();
        let mut count = whole;
        if frac > 0.0 && self.rng.gen::<f64>() < frac {
            count += 1;
        }
        for _ in 0..count {
            let s = self.rng.gen_range(0..n);
            let mut d = self.rng.gen_range(0..n);
            while d == s {
                d = self.rng.gen_range(0..n);
            }
            let route = match self.cfg.strategy {
                Strategy::Ld => self.tables.ld_chain(s, d),
                Strategy::Sp | Strategy::Hd => self.tables.sp().sample_path(s, d, &mut self.rng),
            };
            let bypass = if self.cfg.strategy == Strategy::Hd {
                match designated_bypass(&route, &self.rl, self.net.bc()) {
                    Some(node) => BypassState::Pending { node },
                    None => BypassState::None,
                }
            } else {
                BypassState::None
            };
            let packet = Packet {
                dest: d,
                route,
                next_idx: 1,
                bypass,
                agent_slot: None,
                created_at: self.time - 1,
                sp_len: self.tables.sp().dist(s, d),
            };
            self.counters.generated += 1;
            if self.queues[s as usize].len() < self.cfg.buffer {
                self.queues[s as usize].push_back(packet);
                self.counters.in_transit += 1;
            } else {
                self.counters.dropped_overflow += 1;
                self.counters.drop_by_node[s as usize] += 1;
            }
        }
    }

    fn forward_phase(&mut self) {
        // fresh uniform random service order each step
        for i in (1..self.visit_order.len()).rev() {
            let j = self.rng.gen_range(0..=i);
            self.visit_order.swap(i, j);
        }
        for idx in 0..self.visit_order.len() {
            let u = self.visit_order[idx];
            let Some(mut packet) = self.queues[u as usize].pop_front() else {
                continue;
            };
            let mut next = packet.route[packet.next_idx];

            // bypass decision: fires when the pending designated node is the
            // next hop; the current MI action of that node's agent applies
            if let BypassState::Pending { node } = packet.bypass {
                if next == node {
                    let slot = self
                        .rl
                        .slot(node)
                        .expect("designated bypass node must host an agent");
                    let beta_idx = self.pinned_action.unwrap_or(self.actions[slot]);
                    packet.bypass = BypassState::Taken;
                    packet.agent_slot = Some(slot as u16);
                    self.counters.bypass_decisions += 1;
                    self.mi_stats[slot].directed += 1;
                    if self.tables.beta_value(beta_idx) != 0.0 {
                        // reroute from here; beta = 0 keeps the sampled path
                        let chain = self.tables.bypass_chain(beta_idx, u, packet.dest);
                        let redirected = chain[1..chain.len().saturating_sub(1)]
                            .iter()
                            .any(|&v| v != node && self.rl.slot(v).is_some());
                        if redirected {
                            self.counters.redirects_to_rl += 1;
                            self.mi_stats[slot].redirected += 1;
                        }
                        packet.route = chain;
                        packet.next_idx = 1;
                        next = packet.route[1];
                    }
                }
            }

            if self.link_removed(u, next) {
                self.counters.dropped_missing_link += 1;
                self.counters.drop_by_node[u as usize] += 1;
                self.counters.in_transit -= 1;
                if let Some(slot) = packet.agent_slot {
                    self.mi_stats[slot as usize].dropped += 1;
                }
            } else if next == packet.dest {
                self.counters.delivered += 1;
                self.counters.in_transit -= 1;
                let travel = (self.time - packet.created_at) as u32;
                *self.counters.travel_time_hist.entry(travel).or_insert(0) += 1;
                if let Some(slot) = packet.agent_slot {
                    let stats = &mut self.mi_stats[slot as usize];
                    stats.delivered += 1;
                    let denom = packet.sp_len as f64 * self.cfg.buffer as f64;
                    stats.sum_scaled_travel += (travel as f64 / denom).min(1.0);
                }
            } else if self.queues[next as usize].len() >= self.cfg.buffer {
                self.counters.dropped_overflow += 1;
                self.counters.drop_by_node[next as usize] += 1;
                self.counters.in_transit -= 1;
                if let Some(slot) = packet.agent_slot {
                    self.mi_stats[slot as usize].dropped += 1;
                }
            } else {
                packet.next_idx += 1;
                self.queues[next as usize].push_back(packet);
            }
        }
    }

    /// Place a packet directly into a node's queue (test/bench hook).
    #[doc(hidden)]
    pub fn inject_packet(&mut self, at: u32, route: Vec<u32>) -> bool {
        assert!(route.len() >= 2 && route[0] == at);
        let dest = *route.last().unwrap();
        let sp_len = self.tables.sp().dist(at, dest);
        let packet = Packet {
            dest,
            route,
            next_idx: 1,
            bypass: BypassState::None,
            agent_slot: None,
            created_at: self.time,
            sp_len,
        };
        self.counters.generated += 1;
        if self.queues[at as usize].len() < self.cfg.buffer {
            self.queues[at as usize].push_back(packet);
            self.counters.in_transit += 1;
            true
        } else {
            self.counters.dropped_overflow += 1;
            self.counters.drop_by_node[at as usize] += 1;
            false
        }
    }
}
