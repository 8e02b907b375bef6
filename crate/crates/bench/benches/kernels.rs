use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fusionlab_core::*;

fn bench_ball_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_balls");
    for depth in [20usize, 60] {
        group.bench_with_input(BenchmarkId::new("su", depth), &depth, |b, &depth| {
            let m = SuModel::new(QContext::new(0.5).unwrap());
            let x = GeneratingSet::new(&m, vec![Label::Int(1)]).unwrap();
            b.iter(|| build_balls(&m, &x, depth, false).unwrap());
        });
    }
    let m = UfModel::new(QContext::new(0.5).unwrap());
    let x = GeneratingSet::new(&m, UfModel::canonical_generators()).unwrap();
    group.bench_function("uf_radius_10", |b| {
        b.iter(|| build_balls(&m, &x, 10, false).unwrap());
    });
    group.finish();
}

fn bench_uf_spheres(c: &mut Criterion) {
    let mut group = c.benchmark_group("uf_spheres");
    group.bench_function("float_depth_60", |b| {
        b.iter(|| uf_sphere_sizes(0.5, 60).unwrap());
    });
    group.bench_function("exact_depth_30", |b| {
        b.iter(|| uf_sphere_sizes_exact(30).unwrap());
    });
    group.finish();
}

fn bench_kazhdan(c: &mut Criterion) {
    let mut group = c.benchmark_group("kazhdan_truncation");
    for n in [500usize, 2000] {
        group.bench_with_input(BenchmarkId::new("su_m1", n), &n, |b, &n| {
            b.iter(|| truncated_kazhdan_estimate(Family::Su, 1, 0.5, n).unwrap());
        });
    }
    group.bench_function("so_m2_n2000", |b| {
        b.iter(|| truncated_kazhdan_estimate(Family::So, 2, 0.5, 2000).unwrap());
    });
    group.finish();
}

fn bench_root_systems(c: &mut Criterion) {
    let mut group = c.benchmark_group("root_systems");
    group.bench_function("build_e8", |b| {
        b.iter(|| build_root_system(LieType::E, 8).unwrap());
    });
    let rs = build_root_system(LieType::E, 8).unwrap();
    let lam = DominantWeight(vec![1, 0, 0, 0, 0, 0, 0, 1]);
    group.bench_function("quantum_dim_e8", |b| {
        b.iter(|| quantum_dim(&rs, &lam, 0.9).unwrap());
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_ball_tables,
    bench_uf_spheres,
    bench_kazhdan,
    bench_root_systems
);
criterion_main!(benches);
