//! Sequential versus rayon-parallel timings for the two heavy kernels:
//! betweenness accumulation and next-hop table construction.
//!
//! Run with `cargo bench -p hdroute`; disable the parallel arms with
//! `cargo bench -p hdroute --no-default-features`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hdroute::graph::{betweenness_raw_seq, generate_ba, Network};
use hdroute::routing::{build_table_seq, NodeWeight};

fn adjacency_of(net: &Network) -> Vec<Vec<u32>> {
    (0..net.node_count() as u32)
        .map(|v| net.neighbors(v).to_vec())
        .collect()
}

fn bench_betweenness(c: &mut Criterion) {
    let mut group = c.benchmark_group("betweenness");
    for n in [200usize, 600] {
        let net = generate_ba(n, 3, 7).unwrap();
        let adj = adjacency_of(&net);
        group.bench_with_input(BenchmarkId::new("sequential", n), &adj, |b, adj| {
            b.iter(|| betweenness_raw_seq(adj));
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("rayon", n), &adj, |b, adj| {
            b.iter(|| hdroute::graph::betweenness_raw_par(adj));
        });
    }
    group.finish();
}

fn bench_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("next_hop_table");
    group.sample_size(10);
    for n in [200usize, 600] {
        let net = generate_ba(n, 3, 7).unwrap();
        net.bc(); // prime the cached scores outside the timing loop
        group.bench_with_input(BenchmarkId::new("sequential", n), &net, |b, net| {
            b.iter(|| build_table_seq(net, NodeWeight::Betweenness, 1.0));
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("rayon", n), &net, |b, net| {
            b.iter(|| hdroute::routing::build_table(net, NodeWeight::Betweenness, 1.0));
        });
    }
    group.finish();
}

criterion_group!(benches, bench_betweenness, bench_tables);
criterion_main!(benches);
