use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gqc_bench::{noisy_w, random_qubits};
use gqc_core::{
    convex_hull_oracle, enumerate_bipartitions, gqc_pure, lower_bound_multipartite, mixed_gqc_upper_estimate, w_state,
};
use std::hint::black_box;

fn bench_gqc(c: &mut Criterion) {
    let mut group = c.benchmark_group("gqc_pure");
    for n in [3usize, 6, 9, 12] {
        let psi = random_qubits(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &psi, |b, psi| {
            b.iter(|| gqc_pure(black_box(psi), 3.0).unwrap())
        });
    }
    group.finish();
}

fn bench_partitions(c: &mut Criterion) {
    c.bench_function("enumerate_bipartitions_14", |b| b.iter(|| enumerate_bipartitions(black_box(14)).unwrap()));
}

fn bench_bounds(c: &mut Criterion) {
    let rho = noisy_w(0.8);
    let w = w_state(3).unwrap();
    c.bench_function("lower_bound_multipartite_w3", |b| {
        b.iter(|| lower_bound_multipartite(black_box(&rho), &w, 2.0).unwrap())
    });
    c.bench_function("convex_hull_oracle_m3", |b| b.iter(|| convex_hull_oracle(3, black_box(5.0), 4001).unwrap()));
    c.bench_function("roof_estimate_w3", |b| {
        b.iter(|| mixed_gqc_upper_estimate(black_box(&rho), 2.0, 8, 20, 0).unwrap())
    });
}

criterion_group!(benches, bench_gqc, bench_partitions, bench_bounds);
criterion_main!(benches);
