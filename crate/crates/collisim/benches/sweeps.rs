//! Benchmarks for the data-parallel work sets. Build once with the default
//! `parallel` feature and once with `--no-default-features` to compare the
//! rayon and sequential execution paths; the benchmark names carry the
//! compiled mode so criterion keeps the baselines apart.

use std::f64::consts::FRAC_PI_2;

use criterion::{criterion_group, criterion_main, Criterion};

use collisim::{
    delta_sweep, optimize_measure, run_system_samples, DensityMatrix, ModelParams, StrategyKind,
};

fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

fn base_params(steps: usize) -> ModelParams {
    ModelParams::new(0.05, FRAC_PI_2, steps, StrategyKind::RetainCorrelations).unwrap()
}

fn bench_trajectory(c: &mut Criterion) {
    let params = base_params(5_000);
    let initial = DensityMatrix::excited();
    c.bench_function(&format!("trajectory_5k_steps/{}", mode()), |b| {
        b.iter(|| run_system_samples(&initial, &params).unwrap())
    });
}

fn bench_optimize(c: &mut Criterion) {
    let params = base_params(1_000);
    c.bench_function(&format!("optimize_grid16_1k_steps/{}", mode()), |b| {
        b.iter(|| optimize_measure(&params, 16).unwrap())
    });
}

fn bench_delta_sweep(c: &mut Criterion) {
    let params = base_params(500);
    let deltas: Vec<f64> = (0..16).map(|i| i as f64 * FRAC_PI_2 / 15.0).collect();
    c.bench_function(&format!("delta_sweep_16x_grid8_500_steps/{}", mode()), |b| {
        b.iter(|| delta_sweep(&params, &deltas, 8).unwrap())
    });
}

criterion_group!(benches, bench_trajectory, bench_optimize, bench_delta_sweep);
criterion_main!(benches);
