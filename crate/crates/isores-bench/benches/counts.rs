//! Benchmarks for the counting hot paths.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use isores::{fiber_count, CyclotomicElement, ResidueTuple, Signature};

fn degree_expansion(c: &mut Criterion) {
    let sig = Signature::new(4, 13, 3, vec![4; 6]).unwrap();
    c.bench_function("degree_generic six poles", |b| {
        b.iter(|| black_box(&sig).degree_generic().unwrap())
    });
}

fn fiber_ledger(c: &mut Criterion) {
    let sig = Signature::new(4, 13, 3, vec![4; 6]).unwrap();
    let tuple = ResidueTuple::exact_parse(4, 1, &["1"; 6]).unwrap();
    c.bench_function("fiber_count 107 partitions", |b| {
        b.iter(|| fiber_count(black_box(&sig), black_box(&tuple)).unwrap())
    });
}

fn resonance_profile(c: &mut Criterion) {
    let tuple = ResidueTuple::exact_parse(4, 1, &["1"; 6]).unwrap();
    c.bench_function("resonant_subsets six equal roots", |b| {
        b.iter(|| black_box(&tuple).resonant_subsets().unwrap())
    });
}

fn cyclotomic_multiplication(c: &mut Criterion) {
    let x = CyclotomicElement::parse("1+2*z+z^3-z^7", 64).unwrap();
    let y = CyclotomicElement::parse("3-z^2+5*z^11", 64).unwrap();
    c.bench_function("cyclotomic mul N = 64", |b| {
        b.iter(|| black_box(&x) * black_box(&y))
    });
}

criterion_group!(
    benches,
    degree_expansion,
    fiber_ledger,
    resonance_profile,
    cyclotomic_multiplication
);
criterion_main!(benches);
