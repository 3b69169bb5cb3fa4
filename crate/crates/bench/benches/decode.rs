//! Decoding and scoring benchmarks: maximum-spanning-tree decoding at
//! several sentence lengths, feature extraction plus scoring, and the
//! fixed-length best-path search.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use biparse::{best_path, decode_mst, edge_scores, train_parser, rule_treebank};
use biparse_bench::{random_scores, synthetic_sentence};

fn bench_decode_mst(c: &mut Criterion) {
    let mut group = c.benchmark_group("decode_mst");
    for n in [5usize, 10, 20, 40] {
        let scores = random_scores(n, 42 + n as u64);
        group.bench_function(format!("n{n}"), |b| {
            b.iter(|| decode_mst(black_box(&scores)))
        });
    }
    group.finish();
}

fn bench_edge_scores(c: &mut Criterion) {
    let treebank = rule_treebank(120, "en", 7);
    let (weights, _) = train_parser(&treebank, 5, 7).expect("training succeeds");
    let mut group = c.benchmark_group("edge_scores");
    for n in [10usize, 20, 40] {
        let sentence = synthetic_sentence(n);
        group.bench_function(format!("n{n}"), |b| {
            b.iter(|| edge_scores(black_box(&sentence), black_box(&weights)))
        });
    }
    group.finish();
}

fn bench_best_path(c: &mut Criterion) {
    let mut group = c.benchmark_group("best_path");
    for (n, k) in [(10usize, 3usize), (30, 5)] {
        let scores = random_scores(n, 100 + n as u64);
        let scorer = |a: usize, b: usize| {
            if a == b {
                f64::NEG_INFINITY
            } else {
                scores.get(a.min(b), a.max(b))
            }
        };
        group.bench_function(format!("n{n}_k{k}"), |b| {
            b.iter(|| best_path(black_box((1, n)), black_box(k), scorer, n))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_decode_mst, bench_edge_scores, bench_best_path);
criterion_main!(benches);
