//! Data-parallel kernels on a one-thread pool versus the default pool.
//!
//! `cargo bench --no-default-features` measures the plain sequential build.

use std::f64::consts::PI;
use std::hint::black_box;

use capcert::certify::{multiplicity_mc, reflected_family};
use capcert::construct::{find_bad_pairs, sample_candidates, ConstructionParams};
use capcert::Angle;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::{ThreadPool, ThreadPoolBuilder};

fn pools() -> Vec<(&'static str, ThreadPool)> {
    vec![
        ("one-thread", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn params(dim: usize, count: usize) -> ConstructionParams {
    let psi = Angle::new(PI / 3.0).unwrap();
    let phi = Angle::new(PI / 3.0 + 0.05).unwrap();
    ConstructionParams::new(dim, psi, phi, 11).unwrap().with_override(Some(count))
}

fn bench_candidates(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_candidates");
    let p = params(8, 200_000);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new(name, 200_000), |b| {
            b.iter(|| pool.install(|| black_box(sample_candidates(&p).unwrap())))
        });
    }
    g.finish();
}

fn bench_bad_pairs(c: &mut Criterion) {
    let mut g = c.benchmark_group("find_bad_pairs");
    g.sample_size(20);
    let pts = sample_candidates(&params(8, 4000)).unwrap();
    let psi = Angle::new(PI / 3.0).unwrap();
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new(name, pts.len()), |b| {
            b.iter(|| pool.install(|| black_box(find_bad_pairs(&pts, psi))))
        });
    }
    g.finish();
}

fn bench_multiplicity(c: &mut Criterion) {
    let mut g = c.benchmark_group("multiplicity_mc");
    g.sample_size(20);
    let pts = sample_candidates(&params(6, 48)).unwrap();
    let caps = reflected_family(&pts, Angle::new(PI / 14.0).unwrap()).unwrap();
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new(name, 200_000), |b| {
            b.iter(|| pool.install(|| black_box(multiplicity_mc(&caps, 200_000, 3).unwrap())))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_candidates, bench_bad_pairs, bench_multiplicity);
criterion_main!(benches);
