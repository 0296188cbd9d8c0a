//! Bypass degeneracy: how much betweenness the beta-bypasses of each agent
//! node actually traverse, sampled over random source/destination pairs.

use super::{designated_bypass, RlNodeSet, RoutingTables};
use crate::graph::Network;
use rand::Rng;

/// Per-agent-node row: `mean_bc[i]` is the average (over sampled pairs
/// designated to this node) of the mean normalized BC of the interior nodes
/// of the beta_i-bypass from the decision point to the destination.
#[derive(Debug, Clone)]
pub struct DegeneracyRow {
    pub node: u32,
    pub samples: usize,
    pub mean_bc: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BypassDegeneracy {
    pub beta_set: Vec<f64>,
    pub rows: Vec<DegeneracyRow>,
}

impl BypassDegeneracy {
    /// Agent nodes that intercepted fewer than 10 sampled pairs; their rows
    /// are too noisy to trust.
    pub fn undersampled(&self) -> Vec<u32> {
        self.rows
            .iter()
            .filter(|r| r.samples < 10)
            .map(|r| r.node)
            .collect()
    }
}

/// Sample `n_samples` ordered pairs, route them along a uniformly sampled
/// shortest path, and accumulate the bypass BC statistics per designated
/// agent node and beta.
pub fn bypass_degeneracy(
    net: &Network,
    tables: &RoutingTables,
    rl: &RlNodeSet,
    n_samples: usize,
    rng: &mut impl Rng,
) -> BypassDegeneracy {
    let n = net.node_count() as u32;
    let bc = net.bc();
    let n_beta = tables.beta_set().len();
    let mut sums = vec![vec![0.0f64; n_beta]; rl.len()];
    let mut counts = vec![0usize; rl.len()];

    for _ in 0..n_samples {
        let s = rng.gen_range(0..n);
        let mut d = rng.gen_range(0..n);
        while d == s {
            d = rng.gen_range(0..n);
        }
        let route = tables.sp().sample_path(s, d, rng);
        let Some(agent_node) = designated_bypass(&route, rl, bc) else {
            continue;
        };
        let slot = rl.slot(agent_node).unwrap();
        let pos = route.iter().position(|&v| v == agent_node).unwrap();
        let x = route[pos - 1];
        counts[slot] += 1;
        for beta_idx in 0..n_beta {
            let chain = tables.bypass_chain(beta_idx, x, d);
            sums[slot][beta_idx] += interior_mean_bc(&chain, bc);
        }
    }

    let rows = (0..rl.len())
        .map(|slot| DegeneracyRow {
            node: rl.node_at(slot),
            samples: counts[slot],
            mean_bc: sums[slot]
                .iter()
                .map(|s| if counts[slot] > 0 { s / counts[slot] as f64 } else { 0.0 })
                .collect(),
        })
        .collect();

    BypassDegeneracy {
        beta_set: tables.beta_set().to_vec(),
        rows,
    }
}

/// Mean BC over the nodes strictly between the chain endpoints. A decision
/// point is always at least two hops from the destination, so the interior
/// is nonempty for beta = 0; weighted detours can only be longer.
fn interior_mean_bc(chain: &[u32], bc: &[f64]) -> f64 {
    if chain.len() <= 2 {
        return 0.0;
    }
    let inner = &chain[1..chain.len() - 1];
    inner.iter().map(|&v| bc[v as usize]).sum::<f64>() / inner.len() as f64
}
