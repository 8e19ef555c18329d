use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use horadam_bench::{finite, general, infinite};
use horadam_core::{
    direct_finite, direct_infinite, eval_finite_closed, eval_infinite_closed, FamilyId, Rat,
};
use std::hint::black_box;

fn finite_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("finite");
    for terms in [8, 64, 256] {
        let spec = finite(FamilyId::T1Fin, terms);
        g.bench_with_input(BenchmarkId::new("closed", terms), &spec, |b, s| {
            b.iter(|| eval_finite_closed(black_box(s)))
        });
        g.bench_with_input(BenchmarkId::new("direct", terms), &spec, |b, s| {
            b.iter(|| direct_finite(black_box(s)))
        });
    }
    g.finish();
}

fn infinite_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("infinite");
    let spec = infinite(FamilyId::C2Inf);
    g.bench_function("closed", |b| {
        b.iter(|| eval_infinite_closed(black_box(&spec)))
    });
    for digits in [30, 100] {
        let tol = Rat::new(1, 1).unwrap().scale10(-digits);
        g.bench_with_input(BenchmarkId::new("direct", digits), &tol, |b, t| {
            b.iter(|| direct_infinite(black_box(&spec), t))
        });
    }
    g.finish();
}

fn terms(c: &mut Criterion) {
    let w = general();
    let mut g = c.benchmark_group("term");
    for n in [100i64, 10_000, -10_000] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| w.term(black_box(n)))
        });
    }
    g.finish();
}

criterion_group!(benches, finite_sums, infinite_sums, terms);
criterion_main!(benches);
