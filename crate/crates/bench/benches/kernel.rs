use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use mes_bench::{ctx, ladder, word};
use mes_core::eisenstein::Expander;
use mes_core::hopf::coproduct_word;
use mes_core::numerics::zeta_numeric;
use mes_core::qseries::{g_hat, g_sha_hat};
use mes_core::words::LinComb;

fn coproduct(c: &mut Criterion) {
    let mut group = c.benchmark_group("coproduct");
    for w in ladder() {
        group.bench_with_input(BenchmarkId::from_parameter(w.depth()), &w, |b, w| b.iter(|| coproduct_word(black_box(w))));
    }
    group.finish();
}

fn divisor_series(c: &mut Criterion) {
    let mut group = c.benchmark_group("g_hat");
    for order in [10usize, 20, 40] {
        let w = word(2, &[(2, 1), (3, 1)]);
        group.bench_with_input(BenchmarkId::new("plain", order), &order, |b, &m| b.iter(|| g_hat(black_box(&w), m)));
        let r = word(2, &[(1, 1), (2, 0)]);
        group.bench_with_input(BenchmarkId::new("regularized", order), &order, |b, &m| b.iter(|| g_sha_hat(black_box(&r), m)));
    }
    group.finish();
}

fn zeta_values(c: &mut Criterion) {
    let ctx = ctx();
    let mut group = c.benchmark_group("zeta_numeric");
    group.sample_size(10);
    for w in ladder() {
        group.bench_with_input(BenchmarkId::from_parameter(w.to_string()), &w, |b, w| {
            b.iter(|| zeta_numeric(black_box(w), &ctx).unwrap())
        });
    }
    group.finish();
}

fn fourier(c: &mut Criterion) {
    let mut group = c.benchmark_group("g_fourier");
    group.sample_size(10);
    for w in ladder().into_iter().take(3) {
        let u = LinComb::from_word(w.clone());
        group.bench_with_input(BenchmarkId::from_parameter(w.to_string()), &u, |b, u| {
            // A fresh expander per iteration, so nothing is served from cache.
            b.iter(|| Expander::new(ctx()).g_fourier(black_box(u), 15).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, coproduct, divisor_series, zeta_values, fourier);
criterion_main!(benches);
