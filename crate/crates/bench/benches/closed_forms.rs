use std::f64::consts::TAU;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use schmidt_osc_core::dynamics::Evolver;
use schmidt_osc_core::{coefficient, schmidt_spectrum, sweep_mu, EvolutionMode, InitialState};
use schmidt_osc_perf::{linspace, periodic_grid, EVOLUTION_STATES, SWEEP_STATES};

fn coefficients(c: &mut Criterion) {
    let mut group = c.benchmark_group("coefficient");
    for (n, m) in [(2, 3), (10, 10), (30, 34), (60, 60)] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{n}_{m}")), &(n, m), |b, &(n, m)| {
            b.iter(|| coefficient(black_box(n), m, (n + m) / 2, (n + m + 1) / 2, black_box(0.6)).unwrap())
        });
    }
    group.finish();
}

fn spectra(c: &mut Criterion) {
    let mut group = c.benchmark_group("schmidt_spectrum");
    for (n, m) in [(0, 3), (5, 5), (10, 10), (20, 20), (30, 34)] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{n}_{m}")), &(n, m), |b, &(n, m)| {
            b.iter(|| schmidt_spectrum(black_box(n), m, black_box(0.7)).unwrap())
        });
    }
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let grid = linspace(0.01, 1.0, 100);
    let mut group = c.benchmark_group("sweep_mu");
    for (n, m) in SWEEP_STATES {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{n}_{m}")), &(n, m), |b, &(n, m)| {
            b.iter(|| sweep_mu(n, m, black_box(&grid)).unwrap())
        });
    }
    group.finish();
}

fn evolution(c: &mut Criterion) {
    let times = periodic_grid(TAU, 256);
    let mut group = c.benchmark_group("evolve");
    for (s1, s2) in EVOLUTION_STATES {
        let state = InitialState::new(s1, s2).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{s1}_{s2}")), &state, |b, &state| {
            b.iter(|| {
                Evolver::linear(state, black_box(0.5), 1.0)
                    .unwrap()
                    .trace(&times, EvolutionMode::LinearGap)
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, coefficients, spectra, sweeps, evolution);
criterion_main!(benches);
