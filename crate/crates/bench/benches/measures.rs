use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use graph_measure::{
    enumerate_reduced_diagrams, integrate, monomial, DiagramMode, MeasureContext, MeasureOptions, NeighborhoodRule,
    Weighting,
};
use graph_measure_bench::fixtures;

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduced_diagrams");
    for (name, g) in fixtures() {
        group.bench_function(&name, |b| b.iter(|| enumerate_reduced_diagrams(black_box(&g))));
    }
    group.finish();
}

fn measures(c: &mut Criterion) {
    let mut group = c.benchmark_group("measure_of_domain");
    for (name, g) in fixtures() {
        let ctx = MeasureContext::new(
            g,
            MeasureOptions {
                weighting: Weighting::Weighted,
                ..Default::default()
            },
        );
        let all = ctx.reduced().to_set();
        group.bench_function(&name, |b| b.iter(|| ctx.measure(black_box(&all)).unwrap()));
    }
    group.finish();
}

fn monomials(c: &mut Criterion) {
    let mut group = c.benchmark_group("monomial_integral");
    for (name, g) in fixtures() {
        let ctx = MeasureContext::new(
            g,
            MeasureOptions {
                mode: DiagramMode::Full,
                neighborhood: NeighborhoodRule::Adjacent,
                ..Default::default()
            },
        );
        group.bench_function(&name, |b| {
            b.iter(|| integrate(&ctx, &monomial(&ctx, black_box(2)).unwrap()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, measures, monomials);
criterion_main!(benches);
