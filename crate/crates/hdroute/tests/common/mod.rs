//! Shared oracles for the integration suites: small random connected graphs,
//! exhaustive path enumeration, and finite-difference gradient checks. These
//! stay independent of the library's algorithmic paths they are used to
//! verify.

use hdroute::graph::Network;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random connected simple graph: a random spanning tree plus `extra` random
/// non-duplicate edges.
pub fn random_connected_graph(n: usize, extra: usize, seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for v in 1..n as u32 {
        let u = rng.gen_range(0..v);
        edges.push((u, v));
    }
    let mut tries = 0;
    let mut added = 0;
    while added < extra && tries < extra * 20 {
        tries += 1;
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if !edges.contains(&e) {
            edges.push(e);
            added += 1;
        }
    }
    Network::from_edges(n, &edges).expect("constructed edges are simple")
}

/// Minimum over all simple paths from `x` to `d` of the node-weight sum over
/// the path nodes after `x` (destination included). Exhaustive DFS; only for
/// tiny graphs.
pub fn brute_force_min_path_cost(net: &Network, weights: &[f64], x: u32, d: u32) -> f64 {
    fn dfs(
        net: &Network,
        weights: &[f64],
        d: u32,
        cur: u32,
        visited: &mut Vec<bool>,
        cost: f64,
        best: &mut f64,
    ) {
        if cur == d {
            if cost < *best {
                *best = cost;
            }
            return;
        }
        for &nb in net.neighbors(cur) {
            if !visited[nb as usize] {
                visited[nb as usize] = true;
                dfs(net, weights, d, nb, visited, cost + weights[nb as usize], best);
                visited[nb as usize] = false;
            }
        }
    }
    let mut visited = vec![false; net.node_count()];
    visited[x as usize] = true;
    let mut best = f64::INFINITY;
    dfs(net, weights, d, x, &mut visited, 0.0, &mut best);
    best
}

/// Every shortest path from `s` to `d`, enumerated over the BFS DAG.
pub fn all_shortest_paths(net: &Network, s: u32, d: u32) -> Vec<Vec<u32>> {
    use std::collections::VecDeque;
    let n = net.node_count();
    let mut dist = vec![i32::MAX; n];
    dist[s as usize] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for &v in net.neighbors(u) {
            if dist[v as usize] == i32::MAX {
                dist[v as usize] = dist[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut out = Vec::new();
    let mut path = vec![s];
    fn dfs(
        net: &Network,
        dist: &[i32],
        d: u32,
        path: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let cur = *path.last().unwrap();
        if cur == d {
            out.push(path.clone());
            return;
        }
        for &nb in net.neighbors(cur) {
            if dist[nb as usize] == dist[cur as usize] + 1 {
                path.push(nb);
                dfs(net, dist, d, path, out);
                path.pop();
            }
        }
    }
    dfs(net, &dist, d, &mut path, &mut out);
    out
}

/// Upper 0.99 quantiles of the chi-square distribution for 1..=40 degrees of
/// freedom (precomputed); a uniformity test rejects at p < 0.01 when the
/// statistic exceeds the quantile.
pub const CHI2_Q99: [f64; 40] = [
    6.634897, 9.210340, 11.344867, 13.276704, 15.086272, 16.811894, 18.475307, 20.090235,
    21.665994, 23.209251, 24.724970, 26.216967, 27.688250, 29.141238, 30.577914, 31.999927,
    33.408664, 34.805306, 36.190869, 37.566235, 38.932173, 40.289360, 41.638398, 42.979820,
    44.314105, 45.641683, 46.962942, 48.278236, 49.587884, 50.892181, 52.191395, 53.485772,
    54.775540, 56.060909, 57.342073, 58.619215, 59.892500, 61.162087, 62.428121, 63.690740,
];
