//! Link removal for the resilience experiments.

use crate::error::{Error, Result};
use crate::graph::Network;
use rand::Rng;
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalMode {
    /// Uniformly random links.
    Random,
    /// Links sampled without replacement with probability proportional to
    /// the mean normalized betweenness of their endpoints.
    Bc,
}

impl RemovalMode {
    pub fn name(self) -> &'static str {
        match self {
            RemovalMode::Random => "random",
            RemovalMode::Bc => "bc",
        }
    }
}

/// Choose `round(fraction * live_edges)` edges to cut. Does not modify the
/// network; the simulator records them as missing.
pub fn pick_edges(
    net: &Network,
    already_removed: &HashSet<(u32, u32)>,
    fraction: f64,
    mode: RemovalMode,
    rng: &mut impl Rng,
) -> Result<Vec<(u32, u32)>> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidFraction(fraction));
    }
    let mut live: Vec<(u32, u32)> = net
        .edges()
        .into_iter()
        .filter(|e| !already_removed.contains(e))
        .collect();
    let count = (fraction * live.len() as f64).round() as usize;
    if count == 0 {
        return Ok(Vec::new());
    }

    let mut picked = Vec::with_capacity(count);
    match mode {
        RemovalMode::Random => {
            for _ in 0..count {
                let idx = rng.gen_range(0..live.len());
                picked.push(live.swap_remove(idx));
            }
        }
        RemovalMode::Bc => {
            let bc = net.bc();
            let mut weights: Vec<f64> = live
                .iter()
                .map(|&(u, v)| (bc[u as usize] + bc[v as usize]) / 2.0)
                .collect();
            for _ in 0..count {
                let total: f64 = weights.iter().sum();
                let idx = if total > 0.0 {
                    let mut r = rng.gen::<f64>() * total;
                    let mut chosen = weights.len() - 1;
                    for (i, w) in weights.iter().enumerate() {
                        if r < *w {
                            chosen = i;
                            break;
                        }
                        r -= w;
                    }
                    chosen
                } else {
                    // all live edges sit between zero-BC nodes
                    rng.gen_range(0..live.len())
                };
                picked.push(live.swap_remove(idx));
                weights.swap_remove(idx);
            }
        }
    }
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_ba;

    #[test]
    fn fraction_rounding_to_zero_is_noop() {
        let net = generate_ba(50, 2, 1).unwrap();
        let mut rng = crate::rng::stream(1, "rm", 0);
        let picked = pick_edges(&net, &HashSet::new(), 0.001, RemovalMode::Random, &mut rng).unwrap();
        assert!(picked.is_empty());
    }

    #[test]
    fn invalid_fraction_rejected() {
        let net = generate_ba(50, 2, 1).unwrap();
        let mut rng = crate::rng::stream(1, "rm", 0);
        assert!(pick_edges(&net, &HashSet::new(), 0.0, RemovalMode::Random, &mut rng).is_err());
        assert!(pick_edges(&net, &HashSet::new(), 1.0, RemovalMode::Bc, &mut rng).is_err());
    }

    #[test]
    fn bc_mode_prefers_central_links() {
        // mean endpoint BC of removed edges should exceed random mode's,
        // averaged over seeds
        let net = generate_ba(300, 3, 11).unwrap();
        let bc = net.bc();
        let mean_bc_of = |edges: &[(u32, u32)]| {
            edges
                .iter()
                .map(|&(u, v)| (bc[u as usize] + bc[v as usize]) / 2.0)
                .sum::<f64>()
                / edges.len() as f64
        };
        let mut bc_avg = 0.0;
        let mut rnd_avg = 0.0;
        for seed in 0..10 {
            let mut rng = crate::rng::stream(seed, "rm-bc", 0);
            let picked = pick_edges(&net, &HashSet::new(), 0.02, RemovalMode::Bc, &mut rng).unwrap();
            bc_avg += mean_bc_of(&picked);
            let mut rng = crate::rng::stream(seed, "rm-rnd", 0);
            let picked =
                pick_edges(&net, &HashSet::new(), 0.02, RemovalMode::Random, &mut rng).unwrap();
            rnd_avg += mean_bc_of(&picked);
        }
        assert!(
            bc_avg > rnd_avg,
            "bc-weighted {bc_avg} should exceed random {rnd_avg}"
        );
    }
}
