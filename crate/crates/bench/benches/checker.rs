use criterion::{criterion_group, criterion_main, Criterion};
use hyperfix::engine::{verify, Method};
use hyperfix_bench::{config, flow, knowledge, muddy, traces};

fn bench_knowledge(c: &mut Criterion) {
    let mut g = c.benchmark_group("knowledge");
    for i in knowledge(4) {
        g.bench_function(&i.name, |b| b.iter(|| verify(&i.system, &i.formula, &config(Method::IterOnly)).unwrap()));
    }
    g.finish();
}

fn bench_muddy(c: &mut Criterion) {
    let mut g = c.benchmark_group("muddy");
    g.sample_size(10);
    for i in muddy(2).into_iter().chain(muddy(3)) {
        g.bench_function(&i.name, |b| b.iter(|| verify(&i.system, &i.formula, &config(Method::IterOnly)).unwrap()));
    }
    g.finish();
}

fn bench_flow(c: &mut Criterion) {
    let mut g = c.benchmark_group("flow");
    g.sample_size(10);
    for i in flow() {
        g.bench_function(&i.name, |b| b.iter(|| verify(&i.system, &i.formula, &config(Method::Both)).unwrap()));
    }
    g.finish();
}

fn bench_traces(c: &mut Criterion) {
    let mut g = c.benchmark_group("traces");
    for (i, m) in traces() {
        g.bench_function(format!("{}_{}", i.name, m.name()), |b| b.iter(|| verify(&i.system, &i.formula, &config(m)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bench_knowledge, bench_muddy, bench_flow, bench_traces);
criterion_main!(benches);
