use std::hint::black_box;

use cdloops::analysis::{diassociative_fast, property_report};
use cdloops::automorphism::automorphism_group;
use cdloops::doubling::{self, DoublingParams};
use cdloops::Flavor;
use cdloops_bench::qn;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn doubling(c: &mut Criterion) {
    let mut g = c.benchmark_group("double");
    for n in [3, 5, 7] {
        let (l, s) = qn(n);
        let params = DoublingParams { gamma: 1, epsilon: Some(1) };
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| doubling::double(black_box(&l), &s, params).unwrap())
        });
    }
    g.finish();
}

fn automorphisms(c: &mut Criterion) {
    let mut g = c.benchmark_group("aut");
    g.sample_size(10);
    for n in [3, 4] {
        let (l, _) = qn(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| automorphism_group(black_box(&l), None, Flavor::Plain).unwrap())
        });
    }
    g.finish();
}

fn properties(c: &mut Criterion) {
    let (l, s) = qn(4);
    c.bench_function("property_report/q4", |b| b.iter(|| property_report(black_box(&l), Some(&s))));
    let (l5, _) = qn(5);
    c.bench_function("diassociative_fast/q5", |b| b.iter(|| diassociative_fast(black_box(&l5)).unwrap()));
}

criterion_group!(benches, doubling, automorphisms, properties);
criterion_main!(benches);
