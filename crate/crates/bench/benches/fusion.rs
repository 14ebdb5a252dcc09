use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pathfusion::fusion::tensor_terms;
use pathfusion::{closure, enumerate_ball, ClosureOptions, GroupWord, StallingsGraph};
use pathfusion_bench::{generator_sets, rank2};

fn ball(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_ball");
    for radius in [4, 6, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(radius), &radius, |b, &r| {
            b.iter(|| enumerate_ball(rank2(), r))
        });
    }
    group.finish();
}

fn pairwise_tensors(c: &mut Criterion) {
    let words = enumerate_ball(rank2(), 4);
    c.bench_function("pairwise_tensors/ball4", |b| {
        b.iter(|| {
            let mut terms = 0usize;
            for e in &words {
                for f in &words {
                    terms += tensor_terms(e, f).count();
                }
            }
            black_box(terms)
        })
    });
}

fn closures(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure");
    group.sample_size(10);
    for (name, gens) in generator_sets() {
        let cutoff = if name == "free" { 6 } else { 10 };
        group.bench_with_input(BenchmarkId::new(name, cutoff), &gens, |b, gens| {
            b.iter(|| closure(rank2(), gens, ClosureOptions::new(cutoff)).unwrap())
        });
    }
    group.finish();
}

fn stallings(c: &mut Criterion) {
    let sig = rank2();
    let gens: Vec<GroupWord> = ["a1.a2.A1.a2", "a2.a2.a1", "A1.a2.a2.a1.a2", "a1.a1.a1"]
        .iter()
        .map(|w| GroupWord::parse(sig, w).unwrap())
        .collect();
    let graph = StallingsGraph::build(sig, &gens).unwrap();
    let probes = enumerate_ball(sig, 6);
    c.bench_function("stallings/build", |b| {
        b.iter(|| StallingsGraph::build(sig, black_box(&gens)).unwrap())
    });
    c.bench_function("stallings/member_ball6", |b| {
        b.iter(|| probes.iter().filter(|w| graph.member(&w.endpoint())).count())
    });
}

criterion_group!(benches, ball, pairwise_tensors, closures, stallings);
criterion_main!(benches);
