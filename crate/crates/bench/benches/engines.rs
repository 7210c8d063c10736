use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use finvar_bench::s3_star;
use finvar_core::algebra::{free_algebra_with, generate_subalgebra};
use finvar_core::groups::{todd_coxeter, GroupPresentation};
use finvar_core::Budget;

fn coset_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("todd_coxeter");
    for (name, text) in [
        ("S4", "gens: a b; rels: a^2, b^3, (a*b)^4;"),
        ("A5", "gens: a b; rels: a^2, b^3, (a*b)^5;"),
        ("D32", "gens: a b; rels: a^16, b^2, (a*b)^2;"),
    ] {
        let pres = GroupPresentation::parse(text).unwrap();
        group.bench_function(name, |b| b.iter(|| todd_coxeter(black_box(&pres), 100_000).unwrap()));
    }
    group.finish();
}

fn free_algebras(c: &mut Criterion) {
    let star = s3_star();
    let budget = Budget::default();
    c.bench_function("free_algebra/A(S3)*/1", |b| {
        b.iter(|| free_algebra_with(black_box(&star), &[1], &budget).unwrap())
    });
}

fn closures(c: &mut Criterion) {
    let star = s3_star();
    let n = star.size(0);
    c.bench_function("closure/A(S3)*/pairs", |b| {
        b.iter(|| {
            for x in (0..n).step_by(3) {
                black_box(generate_subalgebra(&star, &[vec![x, n - 1 - x]]).unwrap());
            }
        })
    });
}

criterion_group!(benches, coset_enumeration, free_algebras, closures);
criterion_main!(benches);
