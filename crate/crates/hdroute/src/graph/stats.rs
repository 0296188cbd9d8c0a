//! Degree and path-length statistics for topology summary tables.

use super::Network;
use std::collections::VecDeque;

/// Summary row: mean degree, exact mean shortest-path length (hops),
/// degree relative standard deviation, and heterogeneity `<k^2>/<k>^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub mean_degree: f64,
    pub mean_sp_len: f64,
    pub rsd: f64,
    pub heterogeneity: f64,
}

/// BFS distance sum and reachable-pair count from one source.
fn bfs_dist_sum(net: &Network, s: u32, dist: &mut [i32]) -> (u64, u64) {
    dist.fill(-1);
    dist[s as usize] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(s);
    let (mut sum, mut pairs) = (0u64, 0u64);
    while let Some(u) = queue.pop_front() {
        for &v in net.neighbors(u) {
            if dist[v as usize] < 0 {
                dist[v as usize] = dist[u as usize] + 1;
                sum += dist[v as usize] as u64;
                pairs += 1;
                queue.push_back(v);
            }
        }
    }
    (sum, pairs)
}

/// Exact stats on a connected network. `mean_sp_len` averages BFS distances
/// over all ordered pairs.
pub fn degree_stats(net: &Network) -> DegreeStats {
    let n = net.node_count();
    let degs: Vec<f64> = net.degrees().map(|d| d as f64).collect();
    let mean = degs.iter().sum::<f64>() / n as f64;
    let mean_sq = degs.iter().map(|d| d * d).sum::<f64>() / n as f64;
    let var = (mean_sq - mean * mean).max(0.0);
    let rsd = var.sqrt() / mean;
    let heterogeneity = mean_sq / (mean * mean);

    let (sum, pairs) = all_pairs_distance_sum(net);
    let mean_sp_len = if pairs > 0 {
        sum as f64 / pairs as f64
    } else {
        0.0
    };

    DegreeStats {
        mean_degree: mean,
        mean_sp_len,
        rsd,
        heterogeneity,
    }
}

#[cfg(feature = "parallel")]
fn all_pairs_distance_sum(net: &Network) -> (u64, u64) {
    use rayon::prelude::*;
    // integer sums commute, so a plain parallel reduce stays deterministic
    (0..net.node_count() as u32)
        .into_par_iter()
        .map(|s| {
            let mut dist = vec![-1i32; net.node_count()];
            bfs_dist_sum(net, s, &mut dist)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

#[cfg(not(feature = "parallel"))]
fn all_pairs_distance_sum(net: &Network) -> (u64, u64) {
    let mut dist = vec![-1i32; net.node_count()];
    let (mut sum, mut pairs) = (0u64, 0u64);
    for s in 0..net.node_count() as u32 {
        let (s1, p1) = bfs_dist_sum(net, s, &mut dist);
        sum += s1;
        pairs += p1;
    }
    (sum, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_ba;

    #[test]
    fn complete_graph_k4() {
        let net = generate_ba(4, 3, 1).unwrap();
        let s = degree_stats(&net);
        assert_eq!(s.mean_degree, 3.0);
        assert_eq!(s.rsd, 0.0);
        assert_eq!(s.heterogeneity, 1.0);
        assert_eq!(s.mean_sp_len, 1.0);
    }

    #[test]
    fn path_graph_lengths() {
        let net = crate::graph::Network::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let s = degree_stats(&net);
        // ordered distances: 1,1,1,1,2,2 -> mean 4/3
        assert!((s.mean_sp_len - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn heterogeneity_identity_holds() {
        // H = 1 + RSD^2 is algebraic on any degree sequence
        let net = generate_ba(300, 3, 7).unwrap();
        let s = degree_stats(&net);
        assert!((s.heterogeneity - (1.0 + s.rsd * s.rsd)).abs() < 1e-9);
        assert!(s.heterogeneity >= 1.0);
    }
}
