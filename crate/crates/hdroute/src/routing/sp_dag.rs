//! Per-source shortest-path DAGs with path counts, for hop distances and
//! uniform random shortest-path sampling.

use crate::graph::Network;
use rand::Rng;
use std::collections::VecDeque;

/// One source's BFS result: distances, path counts, and the predecessor DAG
/// in CSR form.
pub struct SourceDag {
    pub dist: Vec<u32>,
    pub sigma: Vec<f64>,
    pred_off: Vec<u32>,
    preds: Vec<u32>,
}

impl SourceDag {
    fn build(net: &Network, s: u32) -> SourceDag {
        let n = net.node_count();
        let mut dist = vec![u32::MAX; n];
        let mut sigma = vec![0.0f64; n];
        let mut pred_lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        dist[s as usize] = 0;
        sigma[s as usize] = 1.0;
        let mut queue = VecDeque::new();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &v in net.neighbors(u) {
                let vi = v as usize;
                if dist[vi] == u32::MAX {
                    dist[vi] = du + 1;
                    queue.push_back(v);
                }
                if dist[vi] == du + 1 {
                    sigma[vi] += sigma[u as usize];
                    pred_lists[vi].push(u);
                }
            }
        }
        let mut pred_off = Vec::with_capacity(n + 1);
        let mut preds = Vec::new();
        pred_off.push(0u32);
        for list in &pred_lists {
            preds.extend_from_slice(list);
            pred_off.push(preds.len() as u32);
        }
        SourceDag {
            dist,
            sigma,
            pred_off,
            preds,
        }
    }

    fn preds_of(&self, v: u32) -> &[u32] {
        let lo = self.pred_off[v as usize] as usize;
        let hi = self.pred_off[v as usize + 1] as usize;
        &self.preds[lo..hi]
    }
}

/// All-source shortest-path data.
pub struct SpData {
    sources: Vec<SourceDag>,
}

impl SpData {
    pub fn build(net: &Network) -> SpData {
        SpData {
            sources: build_all(net),
        }
    }

    /// Hop distance from `s` to `d`.
    pub fn dist(&self, s: u32, d: u32) -> u32 {
        self.sources[s as usize].dist[d as usize]
    }

    /// Number of shortest paths from `s` to `d` (1 when `s == d`).
    pub fn sigma(&self, s: u32, d: u32) -> f64 {
        self.sources[s as usize].sigma[d as usize]
    }

    /// Draw a shortest path uniformly among all shortest paths from `s` to
    /// `d`, walking the predecessor DAG backward from `d` and weighting each
    /// predecessor `u` by `sigma(s, u)`. Returns the node sequence
    /// `[s, ..., d]`.
    pub fn sample_path(&self, s: u32, d: u32, rng: &mut impl Rng) -> Vec<u32> {
        let dag = &self.sources[s as usize];
        debug_assert!(dag.dist[d as usize] != u32::MAX, "disconnected pair");
        let mut path = Vec::with_capacity(dag.dist[d as usize] as usize + 1);
        path.push(d);
        let mut cur = d;
        while cur != s {
            let preds = dag.preds_of(cur);
            let next = if preds.len() == 1 {
                preds[0]
            } else {
                // sigma[cur] equals the sum of predecessor sigmas exactly
                let mut r = rng.gen::<f64>() * dag.sigma[cur as usize];
                let mut chosen = preds[preds.len() - 1];
                for &p in preds {
                    let w = dag.sigma[p as usize];
                    if r < w {
                        chosen = p;
                        break;
                    }
                    r -= w;
                }
                chosen
            };
            path.push(next);
            cur = next;
        }
        path.reverse();
        path
    }
}

#[cfg(feature = "parallel")]
fn build_all(net: &Network) -> Vec<SourceDag> {
    use rayon::prelude::*;
    (0..net.node_count() as u32)
        .into_par_iter()
        .map(|s| SourceDag::build(net, s))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn build_all(net: &Network) -> Vec<SourceDag> {
    (0..net.node_count() as u32)
        .map(|s| SourceDag::build(net, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Network;

    #[test]
    fn unique_path_is_always_returned() {
        let net = Network::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let sp = SpData::build(&net);
        let mut rng = crate::rng::stream(1, "t", 0);
        for _ in 0..50 {
            assert_eq!(sp.sample_path(0, 2, &mut rng), vec![0, 1, 2]);
        }
        assert_eq!(sp.dist(0, 2), 2);
        assert_eq!(sp.sigma(0, 2), 1.0);
    }

    #[test]
    fn c4_opposite_corners_split_evenly() {
        let net = Network::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let sp = SpData::build(&net);
        assert_eq!(sp.sigma(0, 2), 2.0);
        let mut rng = crate::rng::stream(2, "t", 0);
        let draws = 10_000;
        let mut via1 = 0usize;
        for _ in 0..draws {
            let p = sp.sample_path(0, 2, &mut rng);
            assert_eq!(p.len(), 3);
            if p[1] == 1 {
                via1 += 1;
            }
        }
        let freq = via1 as f64 / draws as f64;
        assert!((freq - 0.5).abs() < 0.05, "freq {freq}");
    }
}
