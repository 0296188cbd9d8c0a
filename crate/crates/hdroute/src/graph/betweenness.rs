//! Exact betweenness centrality via Brandes' accumulation.

use std::collections::VecDeque;

/// Per-source stack/sigma/distance workspace, one BFS pass.
struct SourcePass {
    stack: Vec<u32>,
    preds: Vec<Vec<u32>>,
    sigma: Vec<f64>,
    dist: Vec<i32>,
}

fn single_source(adj: &[Vec<u32>], s: usize, pass: &mut SourcePass, acc: &mut [f64]) {
    let n = adj.len();
    pass.stack.clear();
    for p in pass.preds.iter_mut() {
        p.clear();
    }
    pass.sigma[..n].fill(0.0);
    pass.dist[..n].fill(-1);
    pass.sigma[s] = 1.0;
    pass.dist[s] = 0;

    let mut queue = VecDeque::new();
    queue.push_back(s as u32);
    while let Some(v) = queue.pop_front() {
        pass.stack.push(v);
        let dv = pass.dist[v as usize];
        for &w in &adj[v as usize] {
            let wi = w as usize;
            if pass.dist[wi] < 0 {
                pass.dist[wi] = dv + 1;
                queue.push_back(w);
            }
            if pass.dist[wi] == dv + 1 {
                pass.sigma[wi] += pass.sigma[v as usize];
                pass.preds[wi].push(v);
            }
        }
    }

    let mut delta = vec![0.0f64; n];
    while let Some(w) = pass.stack.pop() {
        let wi = w as usize;
        let coeff = (1.0 + delta[wi]) / pass.sigma[wi];
        for &v in &pass.preds[wi] {
            delta[v as usize] += pass.sigma[v as usize] * coeff;
        }
        if wi != s {
            acc[wi] += delta[wi];
        }
    }
}

fn new_pass(n: usize) -> SourcePass {
    SourcePass {
        stack: Vec::with_capacity(n),
        preds: vec![Vec::new(); n],
        sigma: vec![0.0; n],
        dist: vec![-1; n],
    }
}

/// Raw BC, ordered-pair counting: `b(v) = sum over s != d of sigma_sd(v)/sigma_sd`.
pub fn betweenness_raw_seq(adj: &[Vec<u32>]) -> Vec<f64> {
    let n = adj.len();
    let mut acc = vec![0.0f64; n];
    let mut pass = new_pass(n);
    for s in 0..n {
        single_source(adj, s, &mut pass, &mut acc);
    }
    acc
}

/// Parallel over source nodes in fixed-size blocks; block partials are summed
/// in block order so the result is bit-identical to the sequential path
/// regardless of thread count.
#[cfg(feature = "parallel")]
pub fn betweenness_raw_par(adj: &[Vec<u32>]) -> Vec<f64> {
    use rayon::prelude::*;

    const BLOCK: usize = 64;
    let n = adj.len();
    let blocks: Vec<Vec<f64>> = (0..n)
        .collect::<Vec<_>>()
        .par_chunks(BLOCK)
        .map(|sources| {
            let mut acc = vec![0.0f64; n];
            let mut pass = new_pass(n);
            for &s in sources {
                single_source(adj, s, &mut pass, &mut acc);
            }
            acc
        })
        .collect();
    let mut acc = vec![0.0f64; n];
    for block in blocks {
        for (a, b) in acc.iter_mut().zip(block) {
            *a += b;
        }
    }
    acc
}

#[cfg(feature = "parallel")]
pub(crate) fn betweenness_raw(adj: &[Vec<u32>]) -> Vec<f64> {
    betweenness_raw_par(adj)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn betweenness_raw(adj: &[Vec<u32>]) -> Vec<f64> {
    betweenness_raw_seq(adj)
}

/// Independent oracle: count shortest paths per ordered pair by explicit
/// enumeration over the BFS DAG. Only for small graphs (N <= ~30).
pub fn brute_force_bc_raw(adj: &[Vec<u32>]) -> Vec<f64> {
    let n = adj.len();
    let mut acc = vec![0.0f64; n];
    for s in 0..n {
        // BFS distances from s
        let mut dist = vec![i32::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(s as u32);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v as usize] {
                if dist[w as usize] == i32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        for d in 0..n {
            if d == s || dist[d] == i32::MAX {
                continue;
            }
            // enumerate every shortest path s -> d by DFS over the distance DAG
            let mut through = vec![0u64; n];
            let mut total = 0u64;
            let mut path = vec![s as u32];
            enumerate_paths(adj, &dist, d as u32, &mut path, &mut through, &mut total);
            for v in 0..n {
                if v != s && v != d && through[v] > 0 {
                    acc[v] += through[v] as f64 / total as f64;
                }
            }
        }
    }
    acc
}

fn enumerate_paths(
    adj: &[Vec<u32>],
    dist: &[i32],
    target: u32,
    path: &mut Vec<u32>,
    through: &mut [u64],
    total: &mut u64,
) {
    let cur = *path.last().unwrap();
    if cur == target {
        *total += 1;
        for &v in path.iter() {
            through[v as usize] += 1;
        }
        return;
    }
    for &w in &adj[cur as usize] {
        if dist[w as usize] == dist[cur as usize] + 1 {
            path.push(w);
            enumerate_paths(adj, dist, target, path, through, total);
            path.pop();
        }
    }
}
