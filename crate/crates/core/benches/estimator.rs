//! Parallel versus single-threaded execution of the estimator and of a small
//! Monte-Carlo sweep. Build with `--no-default-features` to compile the
//! sequential fallback instead of rayon; both arms then run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dpsbl::harness::{run_experiment, ExperimentSpec, Family, Method};
use dpsbl::sim::simulate;
use dpsbl::SystemConfig;

fn scenario_config() -> SystemConfig {
    SystemConfig { rows: 8, cols: 8, max_iters: 10, warmup_iters: 4, ..Default::default() }
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let all = rayon::ThreadPoolBuilder::new().build().expect("default pool");
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("single pool");
    vec![("parallel", all), ("sequential", one)]
}

fn estimator(c: &mut Criterion) {
    let cfg = scenario_config();
    let scenario = simulate(&cfg, 11).expect("scenario");
    let mut group = c.benchmark_group("dirichlet_estimator");
    group.sample_size(20);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                pool.install(|| {
                    black_box(dpsbl::estimator::run(&cfg, &scenario.observation).expect("run"))
                })
            })
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let fixed = SystemConfig { rows: 4, cols: 4, ..scenario_config() };
    let mut spec = ExperimentSpec::new(Family::MseVsSnr, fixed, Method::ALL.to_vec(), 8, 3);
    spec.sweep = vec![10.0];
    let mut group = c.benchmark_group("monte_carlo_sweep");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| black_box(run_experiment(&spec).expect("experiment"))))
        });
    }
    group.finish();
}

criterion_group!(benches, estimator, monte_carlo);
criterion_main!(benches);
