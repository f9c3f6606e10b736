use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gkm_quadric::decompose::verify_free_module;
use gkm_quadric::relations::{verify_all, VerifyOptions};
use gkm_quadric::selfcheck::k_class_sweep;
use gkm_quadric::{GeneratorTable, QuadricContext, Strategy};

const STRATEGIES: [(&str, Strategy); 2] = [
    ("sequential", Strategy::Sequential),
    ("parallel", Strategy::Parallel),
];

fn k_class_sweeps(c: &mut Criterion) {
    let ctx = QuadricContext::build(3).unwrap();
    let table = GeneratorTable::new(&ctx);
    let mut group = c.benchmark_group("k_class_sweep_n3");
    for (name, s) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(k_class_sweep(ctx.graph(), &table, s)))
        });
    }
    group.finish();
}

fn relation_suite(c: &mut Criterion) {
    let table = GeneratorTable::new(&QuadricContext::build(2).unwrap());
    let mut group = c.benchmark_group("verify_all_n2");
    for (name, s) in STRATEGIES {
        let opts = VerifyOptions {
            strategy: s,
            ..VerifyOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| black_box(verify_all(&table, opts)))
        });
    }
    group.finish();
}

fn free_module(c: &mut Criterion) {
    let table = GeneratorTable::new(&QuadricContext::build(2).unwrap());
    let mut group = c.benchmark_group("free_module_n2_100_trials");
    group.sample_size(20);
    for (name, s) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(verify_free_module(&table, 100, 1, s)))
        });
    }
    group.finish();
}

criterion_group!(benches, k_class_sweeps, relation_suite, free_module);
criterion_main!(benches);
