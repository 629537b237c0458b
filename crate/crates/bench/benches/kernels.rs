use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpmink::{
    lp_surface_measure, solve, solve_discrete, weak_distance, xi_of_polygon, Density, MeasureSpec,
    PipelineConfig, SolverConfig, SymmetryGroup,
};
use lpmink_bench::{random_measure, random_polygon};

fn surface_measure(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp_surface_measure");
    for n in [16, 256, 4096] {
        let poly = random_polygon(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &poly, |b, poly| {
            b.iter(|| lp_surface_measure(black_box(poly), 0.5).unwrap())
        });
    }
    group.finish();
}

fn inner_maximizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("xi_of_polygon");
    for n in [16, 256] {
        // masses from a second body on the same normals
        let poly = random_polygon(n, 2);
        let mu = random_measure(n, 0.3, 2);
        let cfg = SolverConfig::default();
        group.bench_with_input(
            BenchmarkId::from_parameter(n),
            &(poly, mu),
            |b, (poly, mu)| b.iter(|| xi_of_polygon(black_box(poly), mu, 0.5, &cfg).unwrap()),
        );
    }
    group.finish();
}

fn weak(c: &mut Criterion) {
    let mut group = c.benchmark_group("weak_distance");
    for n in [64, 1024] {
        let (a, b) = (random_measure(n, 0.5, 4), random_measure(n, 0.5, 5));
        group.bench_with_input(BenchmarkId::from_parameter(n), &(a, b), |bch, (a, b)| {
            bch.iter(|| weak_distance(black_box(a), black_box(b)))
        });
    }
    group.finish();
}

fn discrete_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_discrete");
    let cfg = SolverConfig::default();
    for n in [8, 32, 128] {
        let mu = random_measure(n, 0.5, 6);
        group.bench_with_input(BenchmarkId::from_parameter(n), &mu, |b, mu| {
            b.iter(|| solve_discrete(black_box(mu), 0.5, &SymmetryGroup::Trivial, &cfg).unwrap())
        });
    }
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let d = Density::from_fn(360, |t| 1.0 + 0.3 * t.cos()).unwrap();
    let mu = MeasureSpec::from_density(d).unwrap();
    let cfg = PipelineConfig::default();
    let g = SymmetryGroup::reflection(0.0);
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("cosine_density_d1", |b| {
        b.iter(|| solve(black_box(&mu), 0.5, &g, &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    surface_measure,
    inner_maximizer,
    weak,
    discrete_solve,
    pipeline
);
criterion_main!(benches);
