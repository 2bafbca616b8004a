use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use fpgivens::cordic::microrotate;
use fpgivens::{qr_decompose, rotate, vectoring, RotationUnit, RotatorConfig, Sigma};
use fpgivens_bench::{hub_single_unit, matrices, word_pairs};

fn stages(c: &mut Criterion) {
    let mut g = c.benchmark_group("microrotate");
    for hub in [false, true] {
        let cfg = RotatorConfig::new(26, 24, hub);
        let pairs = word_pairs(&cfg, 64);
        g.bench_function(if hub { "hub" } else { "conventional" }, |b| {
            b.iter(|| {
                for (x, y) in &pairs {
                    black_box(microrotate(x, y, 5, Sigma::Up, hub).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn rotator(c: &mut Criterion) {
    let cfg = RotatorConfig::new(26, 24, true);
    let pairs = word_pairs(&cfg, 64);
    let (_, _, sigma) = vectoring(&pairs[0].0, &pairs[0].1, &cfg).unwrap();
    c.bench_function("vectoring/hub-26-24", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(vectoring(x, y, &cfg).unwrap());
            }
        })
    });
    c.bench_function("rotate/hub-26-24", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(rotate(x, y, &sigma, &cfg).unwrap());
            }
        })
    });
}

fn unit(c: &mut Criterion) {
    let unit = hub_single_unit();
    let ms = matrices(&unit, 8, 16);
    c.bench_function("givens-pair/hub-single", |b| {
        let (x, y) = (ms[0].get(0, 0), ms[0].get(1, 0));
        b.iter(|| black_box(unit.vector(black_box(x), black_box(y)).unwrap()))
    });
    c.bench_function("qrd-4x4/hub-single", |b| {
        b.iter(|| {
            for m in &ms {
                black_box(qr_decompose(m, &unit, true).unwrap());
            }
        })
    });
}

criterion_group!(benches, stages, rotator, unit);
criterion_main!(benches);
