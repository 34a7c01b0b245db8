use std::hint::black_box;

use contlog::expansion::synthesize_distance;
use contlog::gen::{self, RelationalBounds};
use contlog::semantics::{generate_family, leibniz_partition, Evaluator, FamilyConfig};
use contlog::ultra::{ultraproduct, Ultrafilter};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate_family");
    for size in [3, 6, 10] {
        let mut rng = gen::rng(size as u64);
        let vocab = gen::random_relational_vocabulary(&mut rng, 3, 2);
        let m = gen::random_structure(&mut rng, &vocab, size, 16);
        let family = generate_family(&vocab, &FamilyConfig::new(3));
        group.bench_with_input(BenchmarkId::from_parameter(size), &m, |b, m| {
            b.iter(|| {
                let mut ev = Evaluator::new(m);
                for f in &family {
                    black_box(ev.table(f).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn leibniz(c: &mut Criterion) {
    let mut group = c.benchmark_group("leibniz_partition");
    for size in [6, 20, 40] {
        let mut rng = gen::rng(100 + size as u64);
        let vocab = gen::random_relational_vocabulary(&mut rng, 4, 2);
        let m = gen::random_structure(&mut rng, &vocab, size, 4);
        group.bench_with_input(BenchmarkId::from_parameter(size), &m, |b, m| {
            b.iter(|| black_box(leibniz_partition(m)))
        });
    }
    group.finish();
}

fn synthesis(c: &mut Criterion) {
    let mut rng = gen::rng(7);
    let m = gen::random_relational(
        &mut rng,
        &RelationalBounds {
            max_predicates: 4,
            max_arity: 3,
            max_size: 6,
            denominator: 16,
        },
    );
    c.bench_function("synthesize_distance", |b| {
        b.iter(|| black_box(synthesize_distance(m.vocab()).unwrap()))
    });
    let syn = synthesize_distance(m.vocab()).unwrap();
    c.bench_function("distance_table", |b| {
        b.iter(|| black_box(syn.distance.table(&m).unwrap()))
    });
}

fn products(c: &mut Criterion) {
    let mut rng = gen::rng(11);
    let vocab = gen::random_relational_vocabulary(&mut rng, 2, 2);
    let family: Vec<_> = (0..3)
        .map(|_| gen::random_structure(&mut rng, &vocab, 4, 8))
        .collect();
    let d = Ultrafilter::principal(3, 1).unwrap();
    c.bench_function("ultraproduct_3x4", |b| {
        b.iter(|| black_box(ultraproduct(&family, &d).unwrap()))
    });
}

criterion_group!(benches, evaluation, leibniz, synthesis, products);
criterion_main!(benches);
