//! Sequential versus data-parallel paths. Build with
//! `--no-default-features` to measure the fallback used when the
//! `parallel` feature is off; the parallel entry points then run inline.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use splitreduc::parallel_enabled;
use splitreduc::ramsey::{hamiltonian, RamseySpec};
use splitreduc::solver::{exhaustive_min, parallel_min, SolveOptions};
use splitreduc::split::{count_leaves, walk_leaves, CostConfig, SplitLimits};

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn label(name: &str) -> String {
    format!(
        "{name}/{}",
        if parallel_enabled() {
            "rayon"
        } else {
            "sequential-build"
        }
    )
}

fn exhaustive(c: &mut Criterion) {
    let mut group = c.benchmark_group(label("exhaustive"));
    group.sample_size(10);
    for (m, n, vertices) in [(3, 3, 6), (4, 3, 7)] {
        let h = hamiltonian(&RamseySpec::new(m, n, vertices).unwrap()).unwrap();
        let id = format!("H({m},{n},{vertices})");
        let opts = SolveOptions::counting();
        group.bench_with_input(BenchmarkId::new("sequential", &id), &h, |b, h| {
            b.iter(|| exhaustive_min(h, &opts).unwrap())
        });
        let w = workers();
        group.bench_with_input(
            BenchmarkId::new(format!("parallel-{w}"), &id),
            &h,
            |b, h| b.iter(|| parallel_min(h, w, &opts).unwrap()),
        );
    }
    group.finish();
}

fn splitting(c: &mut Criterion) {
    let mut group = c.benchmark_group(label("split"));
    group.sample_size(10);
    let h = hamiltonian(&RamseySpec::new(4, 3, 8).unwrap()).unwrap();
    let limits = SplitLimits::default();
    for q in [128, 50] {
        let cfg = CostConfig::new(q, 2, true);
        group.bench_with_input(BenchmarkId::new("walk", q), &cfg, |b, cfg| {
            b.iter(|| walk_leaves(&h, cfg, &limits, |_, _| Ok(())).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("fold", q), &cfg, |b, cfg| {
            b.iter(|| count_leaves(&h, cfg, &limits).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exhaustive, splitting);
criterion_main!(benches);
