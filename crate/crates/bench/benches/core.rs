use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use kolrank_core::free_monoid::{free_word_count, Word, WordSet};
use kolrank_core::lattice::{dimension_polynomial, LeaderSet};
use kolrank_core::rank_engine::{chain_type_polynomial, ChainSpec};
use kolrank_core::{decompose, LatticePoint, NumericalPolynomial, Ordinal};

fn leaders(m: usize, d: usize, n: u32) -> LeaderSet {
    // Staircase of n leaders in each coordinate.
    let coords = (0..d)
        .map(|_| {
            (0..n)
                .map(|i| {
                    let mut v = vec![0; m];
                    v[0] = i;
                    v[m - 1] += n - i;
                    LatticePoint(v)
                })
                .collect()
        })
        .collect();
    LeaderSet::new(m, coords).unwrap()
}

fn bench_dimension_polynomial(c: &mut Criterion) {
    let mut g = c.benchmark_group("dimension_polynomial");
    for n in [2u32, 4, 8, 12] {
        let ls = leaders(3, 2, n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ls, |b, ls| {
            b.iter(|| dimension_polynomial(black_box(ls)))
        });
    }
    g.finish();
}

fn bench_decompose(c: &mut Criterion) {
    let mut g = c.benchmark_group("decompose");
    for (name, coeffs) in [("2T+4", vec![4i64, 2]), ("deg3", vec![40, 30, 12, 3]), ("deg4", vec![900, 300, 60, 10, 2])] {
        let p = NumericalPolynomial::from_i64s(&coeffs);
        g.bench_function(name, |b| b.iter(|| decompose(black_box(&p))));
    }
    let chain = chain_type_polynomial(&ChainSpec::new(3, "w^2*2+w*5+9".parse::<Ordinal>().unwrap()).unwrap());
    g.bench_function("chain_w^2*2+w*5+9", |b| b.iter(|| decompose(black_box(&chain.polynomial))));
    g.finish();
}

fn bench_free_word_count(c: &mut Criterion) {
    let mut g = c.benchmark_group("free_word_count");
    let set = WordSet::new(2, [Word::new(vec![2, 1])]).unwrap();
    for t in [8usize, 12, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| free_word_count(black_box(&set), t))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_dimension_polynomial, bench_decompose, bench_free_word_count);
criterion_main!(benches);
