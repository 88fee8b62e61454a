//! Microbenchmarks for the exact-arithmetic kernels: element products and
//! inverses in each ring family, division-free determinants, the full
//! reduction pipeline, and the exhaustive orbit search.

use std::hint::black_box;

use cogredient::localring::{canonical_nonsquare, RingElement};
use cogredient::oracle::{verify_classification, DEFAULT_BUDGET};
use cogredient::reduction::reduce;
use cogredient_bench::{ring, seeded_matrix};
use criterion::{criterion_group, criterion_main, Criterion};

fn element_ops(c: &mut Criterion) {
    let mut group = c.benchmark_group("element");
    for spec in ["zmod:3^3", "gr:3^2:2", "trunc:3:2:3"] {
        let ctx = ring(spec);
        let a = canonical_nonsquare(&ctx);
        let b = RingElement::from_int(&ctx, 5).add(&a);
        group.bench_function(format!("mul/{spec}"), |bench| {
            bench.iter(|| black_box(&a).mul(black_box(&b)))
        });
        group.bench_function(format!("inv/{spec}"), |bench| {
            bench.iter(|| black_box(&a).inv().unwrap())
        });
        let sq = a.mul(&a);
        group.bench_function(format!("sqrt/{spec}"), |bench| {
            bench.iter(|| black_box(&sq).sqrt_unit().unwrap())
        });
    }
    group.finish();
}

fn determinants(c: &mut Criterion) {
    let mut group = c.benchmark_group("det");
    for (spec, n) in [("zmod:3^2", 6), ("gr:3^2:2", 5), ("trunc:3:1:2", 6)] {
        let m = seeded_matrix(spec, n, 7);
        group.bench_function(format!("{spec}/n{n}"), |bench| {
            bench.iter(|| black_box(&m).det().unwrap())
        });
    }
    group.finish();
}

fn reduction_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    for (spec, n) in [("zmod:3^3", 6), ("zmod:5^2", 5), ("gr:3^2:2", 4), ("trunc:3:2:2", 4)] {
        let m = seeded_matrix(spec, n, 11);
        group.bench_function(format!("{spec}/n{n}"), |bench| {
            bench.iter(|| reduce(black_box(&m)).unwrap())
        });
    }
    group.finish();
}

fn orbit_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (spec, n) in [("zmod:3", 2), ("zmod:5", 2), ("zmod:3", 3)] {
        let ctx = ring(spec);
        group.bench_function(format!("{spec}/n{n}"), |bench| {
            bench.iter(|| verify_classification(black_box(&ctx), n, DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    element_ops,
    determinants,
    reduction_pipeline,
    orbit_search
);
criterion_main!(benches);
