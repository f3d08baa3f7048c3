use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eitkerr::lambda3::{steady_state3, LambdaParams};
use eitkerr::parallel::Execution;
use eitkerr::qnd::{evolve_probe, q_function, EvolveOptions, MaterialParams, QWindow};
use num_complex::Complex64;

fn q_grid(c: &mut Criterion) {
    let m = MaterialParams::nv();
    let alpha = Complex64::new(10.0, 0.0);
    let state = evolve_probe(&m, alpha, 1, &EvolveOptions::default()).unwrap();
    let window = QWindow::covering(alpha);
    let mut group = c.benchmark_group("q_grid");
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &exec,
            |b, &exec| b.iter(|| q_function(&state, &window, exec).unwrap()),
        );
    }
    group.finish();
}

fn steady_state_sweep(c: &mut Criterion) {
    let deltas: Vec<f64> = (0..200).map(|k| -0.2 + 0.002 * k as f64).collect();
    let mut group = c.benchmark_group("steady_state_sweep");
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &exec,
            |b, &exec| {
                b.iter(|| {
                    exec.map(&deltas, |&d| {
                        let p = LambdaParams::new(0.5, 0.1).with_detunings(2.0, d);
                        steady_state3(&p).unwrap().element(2, 1)
                    })
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, q_grid, steady_state_sweep);
criterion_main!(benches);
