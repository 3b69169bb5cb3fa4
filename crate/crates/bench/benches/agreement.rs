//! End-to-end agreement benchmarks: the full alternation on the two
//! engineered bilingual scenarios, one needing a single correction round
//! and one needing two.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use biparse::{
    coordinate_descent, multi_round_fixture, pp_flip_fixture, train_projection_model,
    AgreementConfig, Direction, ModelSet,
};

fn bench_flip_pair(c: &mut Criterion) {
    let fixture = pp_flip_fixture();
    let (src_to_tgt, _) = train_projection_model(&fixture.train, Direction::SrcToTgt, 10, 0)
        .expect("training succeeds");
    let (tgt_to_src, _) = train_projection_model(&fixture.train, Direction::TgtToSrc, 10, 0)
        .expect("training succeeds");
    let models = ModelSet {
        src_lang: "en".into(),
        tgt_lang: "hi".into(),
        src_parser: fixture.src_parser.clone(),
        tgt_parser: fixture.tgt_parser.clone(),
        src_to_tgt,
        tgt_to_src,
    };
    let cfg = AgreementConfig::default();
    let (_, pair) = &fixture.test[0];
    c.bench_function("coordinate_descent/flip_pair", |b| {
        b.iter(|| coordinate_descent(black_box(pair), &models, &cfg).expect("descent runs"))
    });
}

fn bench_multi_round_pair(c: &mut Criterion) {
    let fixture = multi_round_fixture();
    c.bench_function("coordinate_descent/multi_round_pair", |b| {
        b.iter(|| {
            coordinate_descent(black_box(&fixture.pair), &fixture.models, &fixture.config)
                .expect("descent runs")
        })
    });
}

criterion_group!(benches, bench_flip_pair, bench_multi_round_pair);
criterion_main!(benches);
