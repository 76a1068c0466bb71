use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qlext_bench::{clique_workload, random_workload};
use qlext_core::fixed_order::fixed_order_min_pages;
use qlext_core::{solve, Algorithm, SolverConfig};
use std::hint::black_box;

fn random_instances(c: &mut Criterion) {
    let config = SolverConfig::default();
    let mut group = c.benchmark_group("random");
    for vertices in [6, 8, 10] {
        let inst = random_workload(1, vertices, 0.4, 2, 1);
        for algo in [Algorithm::Oracle, Algorithm::Xp, Algorithm::KappaEllFpt] {
            group.bench_with_input(BenchmarkId::new(algo.name(), vertices), &inst, |b, inst| {
                b.iter(|| solve(black_box(inst), algo, &config).unwrap())
            });
        }
    }
    group.finish();
}

fn two_new_vertices(c: &mut Criterion) {
    let config = SolverConfig::default();
    let mut group = c.benchmark_group("two_new_vertices");
    for vertices in [8, 12] {
        let inst = random_workload(3, vertices, 0.3, 2, 2);
        for algo in [Algorithm::TwoVertex, Algorithm::Xp] {
            group.bench_with_input(BenchmarkId::new(algo.name(), vertices), &inst, |b, inst| {
                b.iter(|| solve(black_box(inst), algo, &config).unwrap())
            });
        }
    }
    group.finish();
}

fn clique_reductions(c: &mut Criterion) {
    let config = SolverConfig::default();
    let mut group = c.benchmark_group("clique_reduction");
    group.sample_size(20);
    for (k, per_color) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
        let inst = clique_workload(k, per_color, false).unwrap();
        group.bench_with_input(BenchmarkId::new("xp", format!("k{k}_n{per_color}")), &inst, |b, inst| {
            b.iter(|| solve(black_box(inst), Algorithm::Xp, &config).unwrap())
        });
    }
    group.finish();
}

fn fixed_spine(c: &mut Criterion) {
    let mut group = c.benchmark_group("fixed_order_min_pages");
    for (vertices, density) in [(10, 0.3), (20, 0.2), (30, 0.1)] {
        let inst = random_workload(5, vertices, density, 3, 0);
        let spine = inst.layout_h().spine.clone();
        group.bench_with_input(BenchmarkId::from_parameter(vertices), &inst, |b, inst| {
            b.iter(|| fixed_order_min_pages(black_box(inst.h()), &spine).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, random_instances, two_new_vertices, clique_reductions, fixed_spine);
criterion_main!(benches);
