//! Network topologies: generation, loading, betweenness centrality and
//! degree statistics.

mod betweenness;
mod edge_list;
mod generate;
mod stats;

pub use betweenness::{betweenness_raw_seq, brute_force_bc_raw};
pub use edge_list::{load_edge_list, write_edge_list};
pub use generate::{generate, generate_ba, generate_ce, generate_er, CeSpec, TopologySpec};
pub use stats::{degree_stats, DegreeStats};

#[cfg(feature = "parallel")]
pub use betweenness::betweenness_raw_par;

use crate::error::{Error, Result};
use std::collections::VecDeque;
use std::sync::OnceLock;

/// Immutable undirected simple graph with dense node ids `0..N-1`.
///
/// Betweenness centrality is computed lazily on first access and cached;
/// everything else is fixed at construction. Safe to share read-only.
pub struct Network {
    adj: Vec<Vec<u32>>,
    /// Original labels of the nodes when loaded from a file whose ids were
    /// remapped (or reduced to the largest component). `None` for graphs
    /// whose ids are already dense and untouched.
    original_ids: Option<Vec<u64>>,
    bc_cache: OnceLock<BcScores>,
}

struct BcScores {
    raw: Vec<f64>,
    normalized: Vec<f64>,
}

impl Network {
    /// Build from an edge list over nodes `0..n`. Self-loops and duplicate
    /// edges are rejected.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            let (u, v) = (u as usize, v as usize);
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at node {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge at node {u}"
                )));
            }
        }
        Ok(Network {
            adj,
            original_ids: None,
            bc_cache: OnceLock::new(),
        })
    }

    /// Build from adjacency sets produced by a generator; deduplicates
    /// silently instead of erroring.
    pub(crate) fn from_adjacency(adj: Vec<Vec<u32>>) -> Self {
        let mut adj = adj;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Network {
            adj,
            original_ids: None,
            bc_cache: OnceLock::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adj.iter().map(|l| l.len())
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if (u as u32) < v {
                    out.push((u as u32, v));
                }
            }
        }
        out
    }

    /// Original label of node `v` (identity unless the graph was remapped).
    pub fn original_id(&self, v: u32) -> u64 {
        match &self.original_ids {
            Some(map) => map[v as usize],
            None => u64::from(v),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.adj.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.adj.len()];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0u32);
        let mut count = 1usize;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.adj.len()
    }

    /// Reduce to the largest connected component, remapping ids to dense
    /// `0..N'-1` and retaining the original labels.
    pub fn largest_component(self) -> Result<Self> {
        let n = self.adj.len();
        let mut comp = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0usize;
            let mut queue = VecDeque::new();
            comp[s] = id;
            queue.push_back(s as u32);
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in self.neighbors(u) {
                    if comp[v as usize] == usize::MAX {
                        comp[v as usize] = id;
                        queue.push_back(v);
                    }
                }
            }
            sizes.push(size);
        }
        let best = sizes
            .iter()
            .enumerate()
            .max_by_key(|(_, s)| **s)
            .map(|(i, _)| i)
            .ok_or(Error::EmptyGraph)?;
        if sizes[best] == n {
            return Ok(self);
        }
        let mut new_id = vec![u32::MAX; n];
        let mut kept = Vec::with_capacity(sizes[best]);
        for v in 0..n {
            if comp[v] == best {
                new_id[v] = kept.len() as u32;
                kept.push(v);
            }
        }
        let adj = kept
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| comp[w as usize] == best)
                    .map(|&w| new_id[w as usize])
                    .collect()
            })
            .collect();
        let original_ids = kept
            .iter()
            .map(|&v| match &self.original_ids {
                Some(map) => map[v],
                None => v as u64,
            })
            .collect();
        Ok(Network {
            adj,
            original_ids: Some(original_ids),
            bc_cache: OnceLock::new(),
        })
    }

    pub(crate) fn set_original_ids(&mut self, ids: Vec<u64>) {
        self.original_ids = Some(ids);
    }

    fn bc_scores(&self) -> &BcScores {
        self.bc_cache.get_or_init(|| {
            let raw = betweenness::betweenness_raw(&self.adj);
            let n = self.adj.len() as f64;
            let norm_factor = if self.adj.len() > 2 {
                1.0 / ((n - 1.0) * (n - 2.0))
            } else {
                1.0
            };
            let normalized = raw.iter().map(|b| b * norm_factor).collect();
            BcScores { raw, normalized }
        })
    }

    /// Normalized betweenness centrality in `[0, 1]`: ordered-pair path
    /// fractions scaled by `2/[(N-1)(N-2)]` relative to unordered counting.
    pub fn bc(&self) -> &[f64] {
        &self.bc_scores().normalized
    }

    /// Raw betweenness: sum over ordered pairs `s != d` of the fraction of
    /// shortest paths through the node.
    pub fn bc_raw(&self) -> &[f64] {
        &self.bc_scores().raw
    }
}

impl std::fmt::Debug for Network {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Network")
            .field("nodes", &self.node_count())
            .field("edges", &self.edge_count())
            .finish()
    }
}
