use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qcapax_core::capacity::{ce_ad, ce_gadc, crossing_windows, holevo_gadc, trajectory};
use qcapax_core::dynamics::{GadcFamily, Profile};
use qcapax_core::gadc;
use qcapax_core::oracle::{ce_bruteforce, chi_bruteforce};

fn formulas(c: &mut Criterion) {
    let mut g = c.benchmark_group("formula");
    for p in [0.0, 2.0 / 3.0, 1.0] {
        g.bench_with_input(BenchmarkId::new("holevo_gadc", p), &p, |b, &p| {
            b.iter(|| holevo_gadc(black_box(0.6), p).unwrap())
        });
    }
    g.bench_function("ce_gadc", |b| {
        b.iter(|| ce_gadc(black_box(0.6), 2.0 / 3.0).unwrap())
    });
    g.bench_function("ce_ad", |b| b.iter(|| ce_ad(black_box(0.6)).unwrap()));
    g.finish();
}

fn oracles(c: &mut Criterion) {
    let ch = gadc(0.6, 2.0 / 3.0).unwrap();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("chi_bruteforce", |b| {
        b.iter(|| chi_bruteforce(&ch, 4, 1).unwrap())
    });
    g.bench_function("ce_bruteforce", |b| {
        b.iter(|| ce_bruteforce(&ch, 1).unwrap())
    });
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let fam = GadcFamily::new(Profile::Cosine, 0.9).unwrap();
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("trajectory_501", |b| {
        b.iter(|| trajectory(&fam, 10.0, 501).unwrap())
    });
    let full = GadcFamily::new(Profile::Cosine, 1.0).unwrap();
    g.bench_function("crossing_windows", |b| {
        b.iter(|| crossing_windows(&full, 10.0, 1e-3).unwrap())
    });
    g.finish();
}

criterion_group!(benches, formulas, oracles, sweeps);
criterion_main!(benches);
