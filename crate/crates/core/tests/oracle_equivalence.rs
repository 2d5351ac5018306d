use schmidt_osc_core::dynamics::{phase_rates, Evolver};
use schmidt_osc_core::oracle::{
    approximate_wavefunction_svd, approximation_convergence, exact_wavefunction_svd, overlap_coefficient_checked,
    overlap_coefficient_numeric, rdm_spectrum_numeric, unitary_evolution_numeric, unitary_evolution_with_rates,
};
use schmidt_osc_core::{
    coefficient, diagonalize, evolve, gauss_hermite, schmidt_spectrum, von_neumann_entropy, CouplerSpec,
    EvolutionMode, GridSpec, InitialState,
};
use std::f64::consts::{PI, TAU};

fn descending(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

#[test]
fn coefficients_match_quadrature_overlaps() {
    for total in 0..=12u32 {
        let rule = gauss_hermite(total as usize + 8).unwrap();
        for n in 0..=total {
            let m = total - n;
            for k in 0..=total {
                let p = total - k;
                for mu in [0.1, 0.5, 0.9, 1.0] {
                    let closed = coefficient(n, m, k, p, mu).unwrap();
                    let numeric = overlap_coefficient_numeric(n, m, k, p, mu, &rule).unwrap();
                    assert!((closed - numeric).abs() < 1e-8, "({n},{m};{k},{p}) mu={mu}");
                }
            }
        }
    }
}

#[test]
fn quadrature_self_consistent_under_doubling() {
    for (n, m, k) in [(0, 12, 5), (6, 6, 6), (12, 0, 11), (3, 9, 0)] {
        let p = n + m - k;
        for mu in [0.1, 1.0] {
            let v = overlap_coefficient_checked(n, m, k, p, mu).unwrap();
            assert!((v - coefficient(n, m, k, p, mu).unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn grid_rdm_matches_closed_form() {
    let grid = GridSpec::for_quantum(4);
    for (n, m, mu) in [(2, 2, 0.7), (0, 3, 1.0), (1, 4, 0.3), (3, 1, -0.5)] {
        let numeric = rdm_spectrum_numeric(n, m, mu, &grid).unwrap();
        let closed = descending(schmidt_spectrum(n, m, mu).unwrap().lambdas);
        for (i, c) in closed.iter().enumerate() {
            assert!((numeric[i] - c).abs() < 1e-7, "({n},{m}) mu={mu} index {i}");
        }
        assert!(numeric[closed.len()..].iter().all(|x| x.abs() <= 1e-8));
    }
}

#[test]
fn svd_and_rdm_routes_agree() {
    let grid = GridSpec::for_quantum(3);
    for (n, m, mu) in [(1, 2, 0.9), (3, 0, 0.4)] {
        let a = rdm_spectrum_numeric(n, m, mu, &grid).unwrap();
        let b = approximate_wavefunction_svd(n, m, mu, &grid).unwrap();
        for i in 0..=(n + m) as usize {
            assert!((a[i] - b[i]).abs() < 1e-7);
        }
    }
}

#[test]
fn exact_eigenfunction_near_resonance() {
    let spec = CouplerSpec::unit_mass(1.0, 1.0, 1e-4).unwrap();
    let exact = exact_wavefunction_svd(spec, 0, 2, &GridSpec::for_quantum(2)).unwrap();
    let closed = descending(schmidt_spectrum(0, 2, 1.0).unwrap().lambdas);
    for (i, c) in closed.iter().enumerate() {
        assert!((exact[i] - c).abs() < 1e-4);
    }
}

#[test]
fn exact_eigenfunction_converges_as_coupling_shrinks() {
    let couplings = [1e-1, 1e-2, 1e-3, 1e-4];
    let points = approximation_convergence(0, 2, &couplings, &GridSpec::for_quantum(2)).unwrap();
    for pair in points.windows(2) {
        assert!(pair[1].deviation < pair[0].deviation, "{pair:?}");
    }
    assert!(points[3].deviation < 1e-4);
}

#[test]
fn closed_form_evolution_matches_reference() {
    let times: Vec<f64> = (0..32).map(|i| 0.37 + 0.61 * i as f64).collect();
    for (s1, s2) in [(0, 1), (1, 1), (0, 10), (4, 6), (7, 2)] {
        let state = InitialState::new(s1, s2).unwrap();
        for mu in [1.0, 0.5, 0.1] {
            let reference = unitary_evolution_numeric(state, mu, 0.8, &times).unwrap();
            let ev = Evolver::linear(state, mu, 0.8).unwrap();
            for (t, want) in times.iter().zip(&reference) {
                for (got, w) in ev.spectrum(*t).iter().zip(want) {
                    assert!((got - w).abs() < 1e-8);
                }
            }
        }
    }
}

#[test]
fn doubly_excited_swap_matches_reference() {
    let state = InitialState::new(1, 1).unwrap();
    let reference = unitary_evolution_numeric(state, 1.0, 1.0, &[PI]).unwrap();
    let closed = Evolver::linear(state, 1.0, 1.0).unwrap().spectrum(PI);
    for (a, b) in closed.iter().zip(&reference[0]) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn exact_gap_matches_reference_with_same_rates() {
    let form = diagonalize(CouplerSpec::unit_mass(1.0, 1.1, 0.2).unwrap()).unwrap();
    let state = InitialState::new(2, 3).unwrap();
    let rates = phase_rates(state, &form, EvolutionMode::ExactGap);
    let times: Vec<f64> = (0..32).map(|i| 1.3 * i as f64).collect();
    let reference = unitary_evolution_with_rates(state, form.mu, &rates, &times).unwrap();
    let trace = evolve(state, &form, &times, EvolutionMode::ExactGap).unwrap();
    for (got, want) in trace.spectra.iter().zip(&reference) {
        for (a, b) in got.iter().zip(want) {
            assert!((a - b).abs() < 1e-8);
        }
    }
}

#[test]
fn exact_and_linear_gaps_agree_for_weak_coupling() {
    let form = diagonalize(CouplerSpec::unit_mass(1.0, 1.0, 1e-3).unwrap()).unwrap();
    let period = TAU / form.coupling_delta().abs();
    let times: Vec<f64> = (0..128).map(|i| period * i as f64 / 128.0).collect();
    for (s1, s2) in [(0, 10), (5, 10)] {
        let state = InitialState::new(s1, s2).unwrap();
        let exact = evolve(state, &form, &times, EvolutionMode::ExactGap).unwrap();
        let linear = evolve(state, &form, &times, EvolutionMode::LinearGap).unwrap();
        for (a, b) in exact.entropies.iter().zip(&linear.entropies) {
            assert!((a - b).abs() < 5e-3);
        }
    }
}

#[test]
fn balanced_splitter_entropy() {
    let ev = Evolver::linear(InitialState::new(0, 10).unwrap(), 1.0, 1.0).unwrap();
    let reference = unitary_evolution_numeric(InitialState::new(0, 10).unwrap(), 1.0, 1.0, &[PI / 2.0]).unwrap();
    let s = von_neumann_entropy(&ev.spectrum(PI / 2.0));
    assert!((s - von_neumann_entropy(&reference[0])).abs() < 1e-10);
    assert!((s - 1.875_953_605_246_800_4).abs() < 1e-12);
}
