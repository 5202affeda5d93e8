use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use exg_bench::{graph, trace, workloads};
use exg_core::analysis::{automorphism_group, sym_explore, Digraph};
use exg_core::{analyze, build_eg, BuildConfig};

fn bench_trace(c: &mut Criterion) {
    let mut group = c.benchmark_group("trace");
    for (name, spec) in workloads() {
        group.bench_function(name, |b| b.iter(|| trace(black_box(&spec))));
    }
    group.finish();
}

fn bench_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    let cfg = BuildConfig::default();
    for (name, spec) in workloads() {
        let t = trace(&spec);
        group.bench_function(name, |b| b.iter(|| build_eg(black_box(&t), &cfg).unwrap()));
    }
    group.finish();
}

fn bench_analysis(c: &mut Criterion) {
    let mut group = c.benchmark_group("analysis");
    group.sample_size(20);
    for (name, spec) in workloads() {
        let g = graph(&trace(&spec));
        let d = Digraph::from_execution_graph(&g, exg_core::analysis::analysis_kinds());
        group.bench_function(format!("automorphisms/{name}"), |b| {
            b.iter(|| automorphism_group(black_box(&d)))
        });
        group.bench_function(format!("sym_explore/{name}"), |b| b.iter(|| sym_explore(black_box(&d)).unwrap()));
        group.bench_function(format!("analyze/{name}"), |b| b.iter(|| analyze(black_box(&g)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_trace, bench_build, bench_analysis);
criterion_main!(benches);
