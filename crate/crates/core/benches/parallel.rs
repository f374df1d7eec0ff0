//! Sequential against parallel execution on the data-parallel entry points.
//! Build with `--no-default-features` to see the fallback alone.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tcand::exec::Execution;
use tcand::generate::{gen_random_instance, RandomParams};
use tcand::oracle::exact_tcand_with;
use tcand::rounding::monte_carlo;
use tcand::Instance;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn instance(n: usize, m: usize, rounds: usize, seed: u64) -> Instance {
    gen_random_instance(&RandomParams {
        n,
        m,
        max_lhs: 2,
        target_fraction: 0.4,
        rounds: Some(rounds),
        seed,
    })
    .expect("valid parameters")
}

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_tcand");
    group.sample_size(10);
    for n in [14, 18] {
        let inst = instance(n, n + n / 2, 2, 7);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &inst, |b, inst| {
                b.iter(|| exact_tcand_with(inst, exec).expect("solvable"))
            });
        }
    }
    group.finish();
}

fn randomized(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    let inst = instance(40, 60, 1, 3);
    for seeds in [200u64, 1000] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, seeds), &seeds, |b, &seeds| {
                b.iter(|| monte_carlo(&inst, 2.0, seeds, exec).expect("one round"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, exact, randomized);
criterion_main!(benches);
