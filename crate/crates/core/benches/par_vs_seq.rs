//! Parallel-versus-sequential comparison of the two data-parallel inner
//! loops: Monte-Carlo program sampling and the exhaustive vertex-tensor
//! sweep. Both paths compute identical results; the benchmark shows what
//! the rayon sweep buys at desk scale.
//!
//! `cargo bench -p ppcf-core` runs with the parallel feature enabled
//! (the default); the sequential twins are always compiled in.

use criterion::{criterion_group, criterion_main, Criterion};
use ppcf_core::bang::checks;
use ppcf_core::lang::{estimate_dist, estimate_dist_seq, parse_program};
use std::hint::black_box;

fn bench_sampling(c: &mut Criterion) {
    let program = parse_program("fix g. if bernoulli(1/2) then 0 else 1 + g").unwrap();
    let mut group = c.benchmark_group("estimate_dist_geometric_4k");
    group.sample_size(10);
    group.measurement_time(std::time::Duration::from_secs(4));
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(estimate_dist(&program, 4_000, 42, 10_000)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(estimate_dist_seq(&program, 4_000, 42, 10_000)))
    });
    group.finish();
}

fn bench_vertex_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("deep_projection_max_n2");
    group.sample_size(10);
    group.measurement_time(std::time::Duration::from_secs(4));
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(checks::deep_projection_max(2)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(checks::deep_projection_max_seq(2)))
    });
    group.finish();
}

criterion_group!(benches, bench_sampling, bench_vertex_sweep);
criterion_main!(benches);
