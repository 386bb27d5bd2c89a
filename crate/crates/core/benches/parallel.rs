use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use periodforge::bounds::{pattern_search, random_commuting_probe, sweep, sweep_hodge_numbers};
use periodforge::rigidity::jet_probe;
use periodforge::{Exec, HodgeNumbers};

fn modes() -> Vec<(&'static str, Exec)> {
    let mut m = vec![("sequential", Exec::Sequential)];
    if cfg!(feature = "parallel") {
        m.push(("parallel", Exec::Parallel));
    }
    m
}

fn bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep_w4_h2");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| sweep(black_box(4), 2, 128, e).unwrap())
        });
    }
    g.finish();

    let h = HodgeNumbers::new(3, vec![3, 3, 3, 3]).unwrap();
    let mut g = c.benchmark_group("pattern_search_3333");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| pattern_search(black_box(&h), 128, 4, e).unwrap())
        });
    }
    g.finish();

    let h = HodgeNumbers::new(5, vec![2, 2, 3, 3, 2, 2]).unwrap();
    let pattern = pattern_search(&h, 128, 1, Exec::default()).unwrap().witness;
    let mut g = c.benchmark_group("jet_probe_223322_d4");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| jet_probe(black_box(&pattern), None, 4, e).unwrap())
        });
    }
    g.finish();

    let hs = sweep_hodge_numbers(4, 2);
    let mut g = c.benchmark_group("random_probe_200");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| random_commuting_probe(black_box(&hs), 200, 1, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
