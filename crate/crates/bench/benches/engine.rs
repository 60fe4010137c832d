use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ifk_bench::{random_context, random_queries, random_theory, star_diagram};
use ifk_core::diagrams::sum_classification;
use ifk_core::fca::concepts;
use ifk_core::theories::close;
use ifk_core::Entailment;

fn entailment(c: &mut Criterion) {
    let mut group = c.benchmark_group("entails");
    for types in [8, 16, 32] {
        let t = random_theory(7, types, types * 2);
        let queries = random_queries(7, types, 64);
        group.bench_with_input(BenchmarkId::from_parameter(types), &types, |b, _| {
            b.iter(|| queries.iter().filter(|q| t.entails(q).unwrap()).count())
        });
    }
    group.finish();
}

fn closure(c: &mut Criterion) {
    let t = random_theory(11, 6, 8);
    c.bench_function("close/6", |b| {
        b.iter(|| close(black_box(&t), 1 << 12).unwrap())
    });
}

fn next_closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("concepts");
    for size in [8, 12, 16] {
        let k = random_context(5, size, size, 0.35);
        group.bench_with_input(BenchmarkId::from_parameter(size), &k, |b, k| {
            b.iter(|| concepts(k).unwrap().len())
        });
    }
    group.finish();
}

fn sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("sum");
    for spokes in [2, 4, 6] {
        let d = star_diagram(spokes, 6);
        group.bench_with_input(BenchmarkId::from_parameter(spokes), &d, |b, d| {
            b.iter(|| sum_classification(d, 1 << 20).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, entailment, closure, next_closure, sum);
criterion_main!(benches);
