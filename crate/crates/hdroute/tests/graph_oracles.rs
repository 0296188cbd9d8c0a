//! Betweenness and statistics checks against independent oracles.

mod common;

use common::random_connected_graph;
use hdroute::graph::{brute_force_bc_raw, generate_ba, Network};

fn adjacency_of(net: &Network) -> Vec<Vec<u32>> {
    (0..net.node_count() as u32)
        .map(|v| net.neighbors(v).to_vec())
        .collect()
}

#[test]
fn path_p3_center_has_unit_bc() {
    let net = Network::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let bc = net.bc();
    assert_eq!(bc[0], 0.0);
    assert_eq!(bc[2], 0.0);
    assert!((bc[1] - 1.0).abs() < 1e-15);
}

#[test]
fn star_center_has_unit_bc_leaves_zero() {
    let net = Network::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    let bc = net.bc();
    assert!((bc[0] - 1.0).abs() < 1e-15);
    for leaf in 1..4 {
        assert_eq!(bc[leaf], 0.0);
    }
}

#[test]
fn cycle_c5_matches_exhaustive_enumeration() {
    let net = Network::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
    let raw = net.bc_raw();
    let oracle = brute_force_bc_raw(&adjacency_of(&net));
    for v in 0..5 {
        assert!((raw[v] - oracle[v]).abs() < 1e-12);
        assert!((raw[v] - raw[0]).abs() < 1e-12, "C5 is vertex-transitive");
    }
    // each node sees exactly the two distance-2 ordered pairs routed through it
    assert!((raw[0] - 2.0).abs() < 1e-12);
}

#[test]
fn brandes_matches_brute_force_on_random_graphs() {
    for seed in 0..15 {
        let n = 5 + (seed as usize * 7) % 24;
        let net = random_connected_graph(n, n / 2, 1000 + seed);
        let raw = net.bc_raw();
        let oracle = brute_force_bc_raw(&adjacency_of(&net));
        for v in 0..n {
            let denom = oracle[v].abs().max(1.0);
            assert!(
                (raw[v] - oracle[v]).abs() / denom < 1e-9,
                "seed {seed} node {v}: brandes {} vs oracle {}",
                raw[v],
                oracle[v]
            );
        }
    }
}

#[test]
fn ordered_pair_sum_rule_holds() {
    // sum of raw BC equals sum over ordered pairs of (hop distance - 1)
    for seed in 0..8 {
        let n = 6 + (seed as usize * 5) % 18;
        let net = random_connected_graph(n, n / 3, 500 + seed);
        let raw_sum: f64 = net.bc_raw().iter().sum();
        let sp = hdroute::routing::SpData::build(&net);
        let mut dist_sum = 0.0f64;
        for s in 0..n as u32 {
            for d in 0..n as u32 {
                if s != d {
                    dist_sum += (sp.dist(s, d) as f64) - 1.0;
                }
            }
        }
        assert!(
            (raw_sum - dist_sum).abs() < 1e-9 * dist_sum.max(1.0),
            "seed {seed}: {raw_sum} vs {dist_sum}"
        );
    }
}

#[cfg(feature = "parallel")]
#[test]
fn parallel_and_sequential_betweenness_are_bit_identical() {
    let net = generate_ba(300, 3, 5).unwrap();
    let adj = adjacency_of(&net);
    let seq = hdroute::graph::betweenness_raw_seq(&adj);
    let par = hdroute::graph::betweenness_raw_par(&adj);
    for (a, b) in seq.iter().zip(&par) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn generated_networks_satisfy_structural_invariants() {
    let nets = [
        generate_ba(400, 3, 2).unwrap(),
        hdroute::graph::generate_er(400, 6.0, 2).unwrap(),
        hdroute::graph::generate_ce(400, &hdroute::graph::CeSpec::calibrated_j3(), 2).unwrap(),
    ];
    for net in &nets {
        assert!(net.is_connected());
        for v in 0..net.node_count() as u32 {
            for &w in net.neighbors(v) {
                assert_ne!(v, w, "self-loop");
                assert!(net.has_edge(w, v), "asymmetric adjacency");
            }
            let nb = net.neighbors(v);
            assert!(nb.windows(2).all(|p| p[0] < p[1]), "duplicate edge");
        }
        let bc = net.bc();
        assert!(bc.iter().all(|&b| (0.0..=1.0 + 1e-12).contains(&b)));
    }
}
