use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use polyrigid::cauchy::{theorem1_harness, HarnessConfig};
use polyrigid::hessian::lambda_matrix;
use polyrigid::rigidity::{bar_flex_space, rigidity_rank};
use polyrigid::suspension::{inductive_proper_stress, lambda_scalar, SuspensionProfile};
use polyrigid::{Framework, Tolerance};
use polyrigid_bench::{axial_decomposition, hull, suspension};

fn rank(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut g = c.benchmark_group("rigidity_rank");
    for n in [12, 24, 48] {
        let fw = Framework::from_surface(&hull(n, 1));
        g.bench_with_input(BenchmarkId::from_parameter(n), &fw, |b, fw| b.iter(|| rigidity_rank(black_box(fw), &tol)));
    }
    g.finish();
    let fw = Framework::from_surface(&hull(24, 2));
    c.bench_function("flex_space_24", |b| b.iter(|| bar_flex_space(black_box(&fw), &tol)));
}

fn suspensions(c: &mut Criterion) {
    let tol = Tolerance::default();
    let s = suspension(12, SuspensionProfile::Star, 3);
    c.bench_function("lambda_scalar_12", |b| b.iter(|| lambda_scalar(black_box(&s), &tol)));
    c.bench_function("inductive_stress_12", |b| b.iter(|| inductive_proper_stress(black_box(&s), &tol)));
    let d = axial_decomposition(12, 4);
    c.bench_function("lambda_matrix_axial_12", |b| b.iter(|| lambda_matrix(black_box(&d), &tol)));
}

fn harness(c: &mut Criterion) {
    let tol = Tolerance::default();
    let cfg = HarnessConfig { seed: 5, trials: 5, ..HarnessConfig::default() };
    let mut g = c.benchmark_group("theorem1");
    g.sample_size(10);
    g.bench_function("harness_5_trials", |b| b.iter(|| theorem1_harness(black_box(&cfg), &tol)));
    g.finish();
}

criterion_group!(benches, rank, suspensions, harness);
criterion_main!(benches);
