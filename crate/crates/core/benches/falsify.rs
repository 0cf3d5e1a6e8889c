use crg_core::falsify::{random_weight_search_with, End};
use crg_core::graph::catalog;
use crg_core::par::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn random_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("random_weight_search");
    group.sample_size(10);
    for name in ["triangular_prism", "petersen", "hypercube_4"] {
        let g = catalog(name).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), name), &g, |b, g| {
                b.iter(|| random_weight_search_with(g, End::Lower, 500, 1, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, random_search);
criterion_main!(benches);
