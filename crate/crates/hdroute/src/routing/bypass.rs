//! Node-weighted next-hop tables.
//!
//! For each destination `d` a Dijkstra pass over the node weight
//! `w(v) = score(v)^beta` yields, for every node `x`, the first hop of a
//! path minimizing `sum of w over the path nodes after x` (the endpoint
//! terms are constant per pair and do not affect the argmin). Ties break by
//! fewer hops, then smaller next-hop id. With `beta = 0` this is plain BFS.

use crate::graph::Network;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Which per-node score feeds the weight function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeWeight {
    /// Normalized betweenness centrality.
    Betweenness,
    /// Node degree (the static least-degree family).
    Degree,
}

#[derive(PartialEq)]
struct HeapEntry {
    cost: f64,
    hops: u32,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap via reversed compare; costs are finite by construction
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap()
            .then_with(|| other.hops.cmp(&self.hops))
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// N x N next-hop matrix: entry `(x, d)` is the next node from `x` toward
/// `d`; the diagonal is the node itself.
pub struct NextHopTable {
    n: usize,
    next: Vec<u32>,
}

impl NextHopTable {
    pub fn next_hop(&self, from: u32, to: u32) -> u32 {
        self.next[from as usize * self.n + to as usize]
    }

    /// Node sequence `[from, ..., to]` read by chaining next hops.
    pub fn chain(&self, from: u32, to: u32) -> Vec<u32> {
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            let nxt = self.next_hop(cur, to);
            debug_assert!(path.len() <= self.n, "next-hop chain cycled");
            path.push(nxt);
            cur = nxt;
        }
        path
    }
}

/// Per-destination Dijkstra filling one column of the table.
fn relax_destination(
    net: &Network,
    weights: &[f64],
    d: u32,
    dist: &mut [f64],
    hops: &mut [u32],
    next_col: &mut [u32],
) {
    let n = net.node_count();
    dist.fill(f64::INFINITY);
    hops.fill(u32::MAX);
    next_col.fill(u32::MAX);
    dist[d as usize] = 0.0;
    hops[d as usize] = 0;
    next_col[d as usize] = d;

    let mut heap = BinaryHeap::with_capacity(n);
    heap.push(HeapEntry {
        cost: 0.0,
        hops: 0,
        node: d,
    });
    while let Some(HeapEntry { cost, hops: h, node: u }) = heap.pop() {
        let ui = u as usize;
        if cost > dist[ui] || (cost == dist[ui] && h > hops[ui]) {
            continue; // stale entry
        }
        // moving from a neighbor v to u costs the weight of u's head node
        let step = weights[ui];
        for &v in net.neighbors(u) {
            let vi = v as usize;
            let cand_cost = cost + step;
            let cand_hops = h + 1;
            let better = cand_cost < dist[vi]
                || (cand_cost == dist[vi] && cand_hops < hops[vi]);
            if better {
                dist[vi] = cand_cost;
                hops[vi] = cand_hops;
                next_col[vi] = u;
                heap.push(HeapEntry {
                    cost: cand_cost,
                    hops: cand_hops,
                    node: v,
                });
            } else if cand_cost == dist[vi] && cand_hops == hops[vi] && u < next_col[vi] {
                next_col[vi] = u; // equal-cost equal-hops tie: smaller id wins
            }
        }
    }
}

/// Per-node weights `score(v)^beta`. With betweenness scores `0^0 = 1`, so
/// `beta = 0` weighs every node equally.
fn node_weights(net: &Network, source: NodeWeight, beta: f64) -> Vec<f64> {
    match source {
        NodeWeight::Betweenness => net.bc().iter().map(|b| b.powf(beta)).collect(),
        NodeWeight::Degree => (0..net.node_count() as u32)
            .map(|v| (net.degree(v) as f64).powf(beta))
            .collect(),
    }
}

pub fn build_table(net: &Network, source: NodeWeight, beta: f64) -> NextHopTable {
    let weights = node_weights(net, source, beta);
    let n = net.node_count();
    let columns = build_columns(net, &weights);
    // transpose destination columns into a row-major (from, to) matrix
    let mut next = vec![u32::MAX; n * n];
    for (d, col) in columns.iter().enumerate() {
        for (x, &nh) in col.iter().enumerate() {
            next[x * n + d] = nh;
        }
    }
    NextHopTable { n, next }
}

#[cfg(feature = "parallel")]
fn build_columns(net: &Network, weights: &[f64]) -> Vec<Vec<u32>> {
    use rayon::prelude::*;
    (0..net.node_count() as u32)
        .into_par_iter()
        .map(|d| {
            let n = net.node_count();
            let mut dist = vec![0.0; n];
            let mut hops = vec![0u32; n];
            let mut col = vec![u32::MAX; n];
            relax_destination(net, weights, d, &mut dist, &mut hops, &mut col);
            col
        })
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn build_columns(net: &Network, weights: &[f64]) -> Vec<Vec<u32>> {
    let n = net.node_count();
    let mut dist = vec![0.0; n];
    let mut hops = vec![0u32; n];
    (0..net.node_count() as u32)
        .map(|d| {
            let mut col = vec![u32::MAX; n];
            relax_destination(net, weights, d, &mut dist, &mut hops, &mut col);
            col
        })
        .collect()
}

/// Sequential table build, kept callable with the parallel feature on so the
/// two paths can be benchmarked against each other.
pub fn build_table_seq(net: &Network, source: NodeWeight, beta: f64) -> NextHopTable {
    let weights = node_weights(net, source, beta);
    let n = net.node_count();
    let mut dist = vec![0.0; n];
    let mut hops = vec![0u32; n];
    let mut next = vec![u32::MAX; n * n];
    for d in 0..n as u32 {
        let mut col = vec![u32::MAX; n];
        relax_destination(net, &weights, d, &mut dist, &mut hops, &mut col);
        for (x, &nh) in col.iter().enumerate() {
            next[x * n + d as usize] = nh;
        }
    }
    NextHopTable { n, next }
}

/// Cost of a chain under the table's weight convention: sum of
/// `score(v)^beta` over the nodes after the start (destination included).
pub fn chain_cost(net: &Network, source: NodeWeight, beta: f64, chain: &[u32]) -> f64 {
    let weights = node_weights(net, source, beta);
    chain[1..].iter().map(|&v| weights[v as usize]).sum()
}
