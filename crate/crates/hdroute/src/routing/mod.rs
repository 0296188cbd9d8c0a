//! Routing structures: shortest-path sampling, the beta-hierarchical bypass
//! next-hop tables, least-degree routing and bypass degeneracy statistics.

mod bypass;
mod degeneracy;
mod sp_dag;

pub use bypass::{build_table, build_table_seq, chain_cost, NextHopTable, NodeWeight};
pub use degeneracy::{bypass_degeneracy, BypassDegeneracy, DegeneracyRow};
pub use sp_dag::SpData;

use crate::error::{Error, Result};
use crate::graph::Network;

/// The bypass hierarchy used throughout: beta = 0 is the shortest path,
/// larger beta pushes paths away from high-betweenness nodes.
pub const BETA_SET: [f64; 7] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 2.0];

/// The K nodes hosting learning agents: highest betweenness first, ties to
/// the lower node id.
#[derive(Debug, Clone)]
pub struct RlNodeSet {
    nodes: Vec<u32>,
    slot_of: Vec<i32>,
}

impl RlNodeSet {
    /// Empty set (pure shortest-path traffic).
    pub fn empty(n: usize) -> RlNodeSet {
        RlNodeSet {
            nodes: Vec::new(),
            slot_of: vec![-1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in slot order (descending betweenness).
    pub fn nodes(&self) -> &[u32] {
        &self.nodes
    }

    pub fn node_at(&self, slot: usize) -> u32 {
        self.nodes[slot]
    }

    /// Slot index of a node, if it hosts an agent.
    pub fn slot(&self, node: u32) -> Option<usize> {
        match self.slot_of[node as usize] {
            -1 => None,
            s => Some(s as usize),
        }
    }
}

/// Pick the K highest-betweenness nodes, requiring `1 <= K <= N/10`.
pub fn select_rl_nodes(net: &Network, k: usize) -> Result<RlNodeSet> {
    let n = net.node_count();
    if k == 0 || k > n / 10 {
        return Err(Error::InvalidK { k, n });
    }
    let bc = net.bc();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| {
        bc[b as usize]
            .partial_cmp(&bc[a as usize])
            .unwrap()
            .then_with(|| a.cmp(&b))
    });
    order.truncate(k);
    let mut slot_of = vec![-1i32; n];
    for (slot, &node) in order.iter().enumerate() {
        slot_of[node as usize] = slot as i32;
    }
    Ok(RlNodeSet {
        nodes: order,
        slot_of,
    })
}

/// The designated bypass node of a sampled shortest path: the
/// highest-betweenness agent node interior to the path (source and
/// destination excluded), ties to the lower id.
pub fn designated_bypass(route: &[u32], rl: &RlNodeSet, bc: &[f64]) -> Option<u32> {
    if route.len() < 3 || rl.is_empty() {
        return None;
    }
    let mut best: Option<u32> = None;
    for &v in &route[1..route.len() - 1] {
        if rl.slot(v).is_some() {
            best = match best {
                None => Some(v),
                Some(b) => {
                    let better = bc[v as usize] > bc[b as usize]
                        || (bc[v as usize] == bc[b as usize] && v < b);
                    Some(if better { v } else { b })
                }
            };
        }
    }
    best
}

/// All routing state a simulation needs: the SP DAGs, one bypass table per
/// beta, and the least-degree table. Construction is deterministic; the
/// structure is immutable afterwards and shared read-only.
pub struct RoutingTables {
    beta_set: Vec<f64>,
    sp: SpData,
    bypass: Vec<NextHopTable>,
    ld: NextHopTable,
}

impl RoutingTables {
    /// Build every table. The `weighting` selects the node score used by the
    /// bypass hierarchy (betweenness by default; degree is the cheaper proxy
    /// option). The least-degree table always uses degrees with beta = 1.
    pub fn build_weighted(net: &Network, beta_set: &[f64], weighting: NodeWeight) -> RoutingTables {
        let sp = SpData::build(net);
        let bypass = beta_set
            .iter()
            .map(|&b| build_table(net, weighting, b))
            .collect();
        let ld = build_table(net, NodeWeight::Degree, 1.0);
        RoutingTables {
            beta_set: beta_set.to_vec(),
            sp,
            bypass,
            ld,
        }
    }

    pub fn build(net: &Network, beta_set: &[f64]) -> RoutingTables {
        Self::build_weighted(net, beta_set, NodeWeight::Betweenness)
    }

    pub fn beta_set(&self) -> &[f64] {
        &self.beta_set
    }

    pub fn beta_value(&self, idx: usize) -> f64 {
        self.beta_set[idx]
    }

    pub fn sp(&self) -> &SpData {
        &self.sp
    }

    pub fn bypass_table(&self, beta_idx: usize) -> &NextHopTable {
        &self.bypass[beta_idx]
    }

    pub fn ld_table(&self) -> &NextHopTable {
        &self.ld
    }

    /// Bypass path `[from, ..., to]` for a beta index.
    pub fn bypass_chain(&self, beta_idx: usize, from: u32, to: u32) -> Vec<u32> {
        self.bypass[beta_idx].chain(from, to)
    }

    pub fn ld_chain(&self, from: u32, to: u32) -> Vec<u32> {
        self.ld.chain(from, to)
    }
}

/// Spec'd operation name for the full build.
pub fn build_bypass_tables(net: &Network, beta_set: &[f64]) -> RoutingTables {
    RoutingTables::build(net, beta_set)
}

/// Standalone least-degree next-hop matrix (degrees, beta = 1).
pub fn build_ld_table(net: &Network) -> NextHopTable {
    build_table(net, NodeWeight::Degree, 1.0)
}
