use nalgebra::{Matrix2, SymmetricEigen};
use proptest::prelude::*;
use schmidt_osc_core::dynamics::Evolver;
use schmidt_osc_core::special::{hermite, jacobi};
use schmidt_osc_core::stationary::raw_schmidt_modes;
use schmidt_osc_core::{
    canonicalize_masses, diagonalize, schmidt_k_closed_form, schmidt_spectrum, von_neumann_entropy,
    CouplerSpec, EvolutionMode, InitialState,
};
use std::f64::consts::TAU;

/// Bound unit-mass systems: `C` is drawn as a fraction of `2 sqrt(AB)`.
fn bound_spec() -> impl Strategy<Value = (f64, f64, f64)> {
    (1e-2f64..1e2, 1e-2f64..1e2, -0.999f64..0.999)
        .prop_map(|(a, b, frac)| (a, b, frac * 2.0 * (a * b).sqrt()))
}

/// Eigenvalues of `[[a, c/2], [c/2, b]]`, ascending. The small one is taken as
/// the reciprocal of the large eigenvalue of the inverse, which keeps full
/// relative accuracy when the two differ by orders of magnitude.
fn potential_eigenvalues(a: f64, b: f64, c: f64) -> (f64, f64) {
    let largest = |m: Matrix2<f64>| SymmetricEigen::new(m).eigenvalues.max();
    let det = a * b - c * c / 4.0;
    let hi = largest(Matrix2::new(a, c / 2.0, c / 2.0, b));
    let lo = 1.0 / largest(Matrix2::new(b / det, -c / 2.0 / det, -c / 2.0 / det, a / det));
    (lo, hi)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normal_curvatures_are_potential_eigenvalues((a, b, c) in bound_spec()) {
        let form = diagonalize(CouplerSpec::unit_mass(a, b, c).unwrap()).unwrap();
        let (lo, hi) = potential_eigenvalues(a, b, c);
        let (p_lo, p_hi) = (form.a_prime.min(form.b_prime), form.a_prime.max(form.b_prime));
        prop_assert!(rel(p_lo, lo) < 1e-12, "{p_lo} vs {lo}");
        prop_assert!(rel(p_hi, hi) < 1e-12, "{p_hi} vs {hi}");
    }

    #[test]
    fn trace_and_determinant_preserved((a, b, c) in bound_spec()) {
        let f = diagonalize(CouplerSpec::unit_mass(a, b, c).unwrap()).unwrap();
        prop_assert!(rel(f.a_prime + f.b_prime, a + b) < 1e-12);
        prop_assert!(rel(f.a_prime * f.b_prime, a * b - c * c / 4.0) < 1e-10);
        prop_assert!(f.mu.abs() <= 1.0);
        prop_assert!(rel(f.k_param * f.k_param, a * b - c * c / 4.0) < 1e-12);
    }

    #[test]
    fn coupling_sign_flips_mu((a, b, c) in bound_spec()) {
        prop_assume!(c != 0.0);
        let f = diagonalize(CouplerSpec::unit_mass(a, b, c).unwrap()).unwrap();
        let g = diagonalize(CouplerSpec::unit_mass(a, b, -c).unwrap()).unwrap();
        prop_assert_eq!(f.mu, -g.mu);
        prop_assert!(rel(f.a_prime, g.a_prime) < 1e-14);
        prop_assert!(rel(f.b_prime, g.b_prime) < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn energies_increase_in_each_index((a, b, c) in bound_spec(), n in 0u32..40, m in 0u32..40) {
        let f = diagonalize(CouplerSpec::unit_mass(a, b, c).unwrap()).unwrap();
        prop_assert!(f.energy(n + 1, m).value > f.energy(n, m).value);
        prop_assert!(f.energy(n, m + 1).value > f.energy(n, m).value);
    }

    #[test]
    fn canonicalization_keeps_normal_frequencies(
        m1 in 0.05f64..20.0, m2 in 0.05f64..20.0, (a, b, c) in bound_spec(),
    ) {
        let spec = CouplerSpec::new(m1, m2, a, b, c).unwrap();
        let form = diagonalize(spec).unwrap();
        prop_assert!(canonicalize_masses(spec).unwrap().is_canonical());
        // det(V - w^2 M) = 0 as a quadratic in w^2.
        let qa = m1 * m2;
        let qb = -(a * m2 + b * m1);
        let qc = a * b - c * c / 4.0;
        let root = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
        let big = (-qb + root) / (2.0 * qa);
        let small = qc / (qa * big);
        let mut got = [form.a_prime.sqrt(), form.b_prime.sqrt()];
        got.sort_by(f64::total_cmp);
        prop_assert!(rel(got[0], small.sqrt()) < 1e-12, "{} vs {}", got[0], small.sqrt());
        prop_assert!(rel(got[1], big.sqrt()) < 1e-12, "{} vs {}", got[1], big.sqrt());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn jacobi_reflection_symmetry(a in 0u32..=12, b in -10.0f64..10.0, c in -10.0f64..10.0, x in -5.0f64..5.0) {
        let lhs = jacobi(a, b, c, -x);
        let rhs = if a % 2 == 0 { 1.0 } else { -1.0 } * jacobi(a, c, b, x);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(rhs.abs()).max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn hermite_parity(n in 0u32..=30, x in -6.0f64..6.0) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(hermite(n, -x), sign * hermite(n, x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn schmidt_modes_even_in_mu(n in 0u32..=30, m in 0u32..=30, mu in 0.0f64..=1.0) {
        prop_assert_eq!(raw_schmidt_modes(n, m, mu).unwrap(), raw_schmidt_modes(n, m, -mu).unwrap());
    }

    #[test]
    fn raw_modes_are_normalized(n in 0u32..=40, m in 0u32..=40, mu in -1.0f64..=1.0) {
        prop_assume!(n + m <= 40);
        let raw = raw_schmidt_modes(n, m, mu).unwrap();
        let sum: f64 = raw.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-10, "sum {sum}");
        prop_assert!(raw.iter().all(|&l| (0.0..=1.0 + 1e-12).contains(&l)));
    }

    #[test]
    fn entropy_bounded_by_rank(n in 0u32..=30, m in 0u32..=30, mu in -1.0f64..=1.0) {
        let s = schmidt_spectrum(n, m, mu).unwrap().entanglement().entropy;
        prop_assert!(s >= 0.0);
        prop_assert!(s <= (f64::from(n + m + 1)).ln() + 1e-12);
    }

    #[test]
    fn closed_form_k_matches_inverse_purity(m in 0u32..=20, mu in -1.0f64..=1.0) {
        let k = schmidt_k_closed_form(m, mu).unwrap();
        let purity: f64 = schmidt_spectrum(0, m, mu).unwrap().lambdas.iter().map(|l| l * l).sum();
        prop_assert!(rel(k, 1.0 / purity) < 1e-10);
    }
}

#[test]
fn closed_form_k_grows_with_m() {
    for mu in [0.25, 0.5, 1.0] {
        for m in 0..30 {
            assert!(schmidt_k_closed_form(m + 1, mu).unwrap() > schmidt_k_closed_form(m, mu).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evolution_is_unitary(s1 in 0u32..=15, s2 in 0u32..=15, mu in -1.0f64..=1.0, t in 0.0f64..1e3) {
        let ev = Evolver::linear(InitialState::new(s1, s2).unwrap(), mu, 0.37).unwrap();
        let lam = ev.spectrum(t);
        let sum: f64 = lam.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
        prop_assert!(lam.iter().all(|&l| (0.0..=1.0 + 1e-12).contains(&l)));
    }

    #[test]
    fn linear_gap_time_reversal(s1 in 0u32..=10, s2 in 0u32..=10, mu in -1.0f64..=1.0, x in 0.0f64..TAU) {
        let ev = Evolver::linear(InitialState::new(s1, s2).unwrap(), mu, 1.0).unwrap();
        let a = von_neumann_entropy(&ev.spectrum(x));
        let b = von_neumann_entropy(&ev.spectrum(TAU - x));
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn linear_gap_periodicity((a, b, c) in bound_spec(), s1 in 0u32..=8, s2 in 0u32..=8, t in 0.0f64..50.0) {
        prop_assume!(c.abs() > 1e-3);
        let form = diagonalize(CouplerSpec::unit_mass(a, b, c).unwrap()).unwrap();
        let delta = form.coupling_delta();
        prop_assume!(delta.abs() > 1e-3);
        let ev = Evolver::from_form(InitialState::new(s1, s2).unwrap(), &form, EvolutionMode::LinearGap).unwrap();
        let period = TAU / delta.abs();
        for (x, y) in ev.spectrum(t).iter().zip(ev.spectrum(t + period)) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}
