//! Brute-force reference computations used to check the closed forms.
//!
//! Two routes are kept deliberately separate. Overlap coefficients and the
//! dynamics reference come from tensor-product Gauss-Hermite quadrature;
//! Schmidt spectra come from sampling the two-body wavefunction on a uniform
//! grid and diagonalizing the trapezoid-weighted reduced density matrix (or
//! taking the SVD of the weighted sample matrix).
//!
//! None of this is fast. It is not meant to be.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::dynamics::InitialState;
use crate::error::{Error, Result};
use crate::model::{diagonalize, CouplerSpec, DiagonalForm};
use crate::special::{gauss_hermite, hermite_normalized, QuadratureRule, MAX_QUADRATURE_ORDER};
use crate::stationary::{check_mu, schmidt_spectrum};

/// Extra quadrature points beyond the largest quantum number.
pub const QUADRATURE_MARGIN: usize = 8;
/// Maximum change allowed when the quadrature order is doubled.
pub const QUADRATURE_SELF_CONSISTENCY: f64 = 1e-10;
/// Maximum eigenvalue mass allowed beyond the expected Schmidt rank, and
/// maximum deviation of the sampled norm from one.
pub const GRID_MASS_TOLERANCE: f64 = 1e-6;
/// Maximum asymmetry of the discretized reduced density matrix.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

const MIN_GRID_POINTS: usize = 64;

/// Uniform grid on `[-half_width, half_width]` used for both coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    half_width: f64,
    points: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::invalid("half_width", format!("must be finite and > 0, got {half_width}")));
        }
        if points < MIN_GRID_POINTS {
            return Err(Error::invalid("points", format!("need at least {MIN_GRID_POINTS}, got {points}")));
        }
        Ok(Self { half_width, points })
    }

    /// Default grid for states with quantum numbers up to `max_n`:
    /// `2 sqrt(2 max_n + 1) + 4` natural lengths, 512 points per axis.
    pub fn for_quantum(max_n: u32) -> Self {
        let half_width = 2.0 * (2.0 * f64::from(max_n) + 1.0).sqrt() + 4.0;
        Self { half_width, points: 512 }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn coordinates(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points).map(|i| -self.half_width + h * i as f64).collect()
    }

    /// Trapezoid weights.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.points];
        w[0] = 0.5 * h;
        w[self.points - 1] = 0.5 * h;
        w
    }
}

/// Running comparison of closed-form values against an oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub tolerance: f64,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    /// Label of the case with the largest absolute error.
    pub worst_case: Option<String>,
    pub passed: bool,
    pub checks: usize,
}

impl ComparisonReport {
    pub fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            max_abs_error: 0.0,
            max_rel_error: 0.0,
            worst_case: None,
            passed: true,
            checks: 0,
        }
    }

    /// Records one comparison. The label is only built when it becomes the
    /// worst case.
    pub fn record<L: FnOnce() -> String>(&mut self, label: L, expected: f64, actual: f64) {
        self.checks += 1;
        let abs = (expected - actual).abs();
        let abs = if abs.is_nan() { f64::INFINITY } else { abs };
        // Relative to the expected value, floored at the tolerance so that
        // near-zero references do not dominate.
        let rel = abs / expected.abs().max(self.tolerance);
        if abs > self.max_abs_error || self.worst_case.is_none() {
            self.max_abs_error = abs;
            self.worst_case = Some(label());
        }
        self.max_rel_error = self.max_rel_error.max(rel);
        self.passed = self.max_abs_error <= self.tolerance;
    }

    /// Marks the report failed for a reason that is not a numeric deviation.
    pub fn fail(&mut self, label: String) {
        self.checks += 1;
        self.passed = false;
        self.max_abs_error = f64::INFINITY;
        self.worst_case = Some(label);
    }

    pub fn merge(&mut self, other: &ComparisonReport) {
        self.checks += other.checks;
        if other.max_abs_error > self.max_abs_error || (self.worst_case.is_none() && other.worst_case.is_some()) {
            self.max_abs_error = self.max_abs_error.max(other.max_abs_error);
            self.worst_case.clone_from(&other.worst_case);
        }
        self.max_rel_error = self.max_rel_error.max(other.max_rel_error);
        self.passed = self.passed && other.passed && self.max_abs_error <= self.tolerance;
    }
}

/// Normalized Hermite values `h_k(x_i)` for every node, `k = 0..=n_max`.
fn hermite_table(n_max: u32, xs: &[f64]) -> Vec<Vec<f64>> {
    xs.iter().map(|&x| hermite_normalized(n_max, x)).collect()
}

/// `<Psi_{n,m}(y1, y2) | phi_k(x1) phi_p(x2)>` by tensor-product quadrature.
///
/// With unit frequencies the four Gaussians combine into `e^{-(x1^2 + x2^2)}`
/// because the rotation preserves `x1^2 + x2^2`, so the remaining integrand is
/// a polynomial and the rule is exact once its order exceeds `n + m`.
pub fn overlap_coefficient_numeric(
    n: u32,
    m: u32,
    k: u32,
    p: u32,
    mu: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    check_mu(mu)?;
    let needed = n.max(m).max(k).max(p) as usize + QUADRATURE_MARGIN;
    if rule.order() < needed {
        return Err(Error::invalid(
            "quadrature order",
            format!("{} is below the required {needed}", rule.order()),
        ));
    }
    let alpha = mu.atan();
    let (s, c) = alpha.sin_cos();
    let nodes = rule.nodes();
    let weights = rule.weights();
    let basis = hermite_table(k.max(p), nodes);
    let top = n.max(m);
    let mut total = crate::special::CompensatedSum::new();
    for (i, &x1) in nodes.iter().enumerate() {
        for (j, &x2) in nodes.iter().enumerate() {
            let y1 = x1 * c - x2 * s;
            let y2 = x1 * s + x2 * c;
            let h1 = hermite_normalized(top, y1);
            let h2 = hermite_normalized(top, y2);
            let v = h1[n as usize] * h2[m as usize] * basis[i][k as usize] * basis[j][p as usize];
            total.add(weights[i] * weights[j] * v);
        }
    }
    Ok(total.value())
}

/// Quadrature overlap at order `n + m + 8`, confirmed by repeating at twice
/// that order.
pub fn overlap_coefficient_checked(n: u32, m: u32, k: u32, p: u32, mu: f64) -> Result<f64> {
    let order = (n + m) as usize + QUADRATURE_MARGIN;
    let order = order.max(k.max(p) as usize + QUADRATURE_MARGIN);
    if 2 * order > MAX_QUADRATURE_ORDER {
        return Err(Error::invalid("n + m", "too large for the quadrature oracle"));
    }
    let coarse = overlap_coefficient_numeric(n, m, k, p, mu, &gauss_hermite(order)?)?;
    let fine = overlap_coefficient_numeric(n, m, k, p, mu, &gauss_hermite(2 * order)?)?;
    if (coarse - fine).abs() > QUADRATURE_SELF_CONSISTENCY {
        return Err(Error::Convergence(format!(
            "overlap ({n},{m};{k},{p}) moved by {:e} when the order was doubled",
            (coarse - fine).abs()
        )));
    }
    Ok(fine)
}

/// Weighted samples `Psi(x_i, x_j) sqrt(w_i w_j)` of a wavefunction
/// `psi1(y1) psi2(y2)` with `y` rotated by `alpha` and the given frequencies.
fn weighted_samples(n: u32, m: u32, alpha: f64, omega1: f64, omega2: f64, grid: &GridSpec) -> DMatrix<f64> {
    let xs = grid.coordinates();
    let ws: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    let (s, c) = alpha.sin_cos();
    let (r1, r2) = (omega1.sqrt(), omega2.sqrt());
    let norm = (omega1 * omega2).powf(0.25);
    let size = grid.points();
    DMatrix::from_fn(size, size, |i, j| {
        let (x1, x2) = (xs[i], xs[j]);
        let u1 = r1 * (x1 * c - x2 * s);
        let u2 = r2 * (x1 * s + x2 * c);
        let h1 = hermite_normalized(n, u1)[n as usize];
        let h2 = hermite_normalized(m, u2)[m as usize];
        norm * h1 * h2 * (-0.5 * (u1 * u1 + u2 * u2)).exp() * ws[i] * ws[j]
    })
}

fn sorted_descending(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Checks the sampled norm and the mass outside the expected Schmidt rank.
fn check_grid(values: &[f64], rank: usize) -> Result<()> {
    let norm: f64 = values.iter().sum();
    if (norm - 1.0).abs() > GRID_MASS_TOLERANCE {
        return Err(Error::GridInadequate(format!("sampled norm is {norm}")));
    }
    let tail: f64 = values.iter().skip(rank).map(|v| v.abs()).sum();
    if tail > GRID_MASS_TOLERANCE {
        return Err(Error::GridInadequate(format!(
            "eigenvalue mass {tail:e} beyond index {}",
            rank - 1
        )));
    }
    Ok(())
}

fn rdm_eigenvalues(samples: &DMatrix<f64>) -> Result<Vec<f64>> {
    let rho = samples * samples.transpose();
    let asym = rho
        .iter()
        .zip(rho.transpose().iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if asym > HERMITICITY_TOLERANCE {
        return Err(Error::NumericalConsistency(format!(
            "reduced density matrix asymmetric by {asym:e}"
        )));
    }
    let rho = (&rho + rho.transpose()) * 0.5;
    Ok(sorted_descending(SymmetricEigen::new(rho).eigenvalues.iter().copied().collect()))
}

fn singular_spectrum(samples: DMatrix<f64>) -> Vec<f64> {
    let sv = samples.singular_values();
    let squares: Vec<f64> = sv.iter().map(|s| s * s).collect();
    sorted_descending(squares)
}

/// Eigenvalues of the reduced density matrix of `Psi_{n,m}` in the weak
/// coupling form (both normal modes at unit frequency), sorted descending.
///
/// The values are not renormalized; their sum is the sampled norm.
pub fn rdm_spectrum_numeric(n: u32, m: u32, mu: f64, grid: &GridSpec) -> Result<Vec<f64>> {
    check_mu(mu)?;
    let samples = weighted_samples(n, m, mu.atan(), 1.0, 1.0, grid);
    let values = rdm_eigenvalues(&samples)?;
    check_grid(&values, (n + m) as usize + 1)?;
    Ok(values)
}

/// Same state as [`rdm_spectrum_numeric`], via singular values of the sampled
/// wavefunction, normalized to unit sum.
pub fn approximate_wavefunction_svd(n: u32, m: u32, mu: f64, grid: &GridSpec) -> Result<Vec<f64>> {
    check_mu(mu)?;
    let values = singular_spectrum(weighted_samples(n, m, mu.atan(), 1.0, 1.0, grid));
    check_grid(&values, (n + m) as usize + 1)?;
    Ok(normalize(values))
}

fn normalize(values: Vec<f64>) -> Vec<f64> {
    let sum: f64 = values.iter().sum();
    values.into_iter().map(|v| v / sum).collect()
}

/// Schmidt spectrum of the exact eigenfunction, with normal-mode frequencies
/// `sqrt(A')` and `sqrt(B')`, sampled in the original coordinates.
pub fn exact_wavefunction_svd(spec: CouplerSpec, n: u32, m: u32, grid: &GridSpec) -> Result<Vec<f64>> {
    let form = diagonalize(spec)?;
    exact_form_svd(&form, n, m, grid)
}

fn exact_form_svd(form: &DiagonalForm, n: u32, m: u32, grid: &GridSpec) -> Result<Vec<f64>> {
    let samples = weighted_samples(n, m, form.alpha, form.a_prime.sqrt(), form.b_prime.sqrt(), grid);
    let values = singular_spectrum(samples);
    let norm: f64 = values.iter().sum();
    if (norm - 1.0).abs() > GRID_MASS_TOLERANCE {
        return Err(Error::GridInadequate(format!("sampled norm is {norm}")));
    }
    Ok(normalize(values))
}

/// Deviation of the exact-eigenfunction spectrum from the weak-coupling
/// closed form for one coupling strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub c: f64,
    pub mu: f64,
    pub deviation: f64,
}

/// Measures how the exact spectrum approaches the closed form as `C`
/// shrinks, at `A = B = 1`.
pub fn approximation_convergence(n: u32, m: u32, couplings: &[f64], grid: &GridSpec) -> Result<Vec<ConvergencePoint>> {
    couplings
        .iter()
        .map(|&c| {
            let form = diagonalize(CouplerSpec::unit_mass(1.0, 1.0, c)?)?;
            let exact = exact_form_svd(&form, n, m, grid)?;
            let closed = sorted_descending(schmidt_spectrum(n, m, form.mu)?.lambdas);
            let deviation = exact
                .iter()
                .enumerate()
                .map(|(i, &v)| (v - closed.get(i).copied().unwrap_or(0.0)).abs())
                .fold(0.0, f64::max);
            Ok(ConvergencePoint { c, mu: form.mu, deviation })
        })
        .collect()
}

/// `s + 1` square matrix `U[k][n] = A^{k, s-k}_{n, s-n}` from quadrature.
fn overlap_matrix(s: u32, mu: f64) -> Result<DMatrix<f64>> {
    let rule = gauss_hermite(s as usize + QUADRATURE_MARGIN)?;
    let dim = s as usize + 1;
    let mut u = DMatrix::zeros(dim, dim);
    for k in 0..=s {
        for n in 0..=s {
            u[(k as usize, n as usize)] = overlap_coefficient_numeric(n, s - n, k, s - k, mu, &rule)?;
        }
    }
    Ok(u)
}

/// Reference evolution: dense products `U diag(e^{-i w_n t}) U^T e_{s1}` with
/// the overlap matrix taken from quadrature. Returns `|c_k(t)|^2` per time.
pub fn unitary_evolution_with_rates(
    state: InitialState,
    mu: f64,
    rates: &[f64],
    times: &[f64],
) -> Result<Vec<Vec<f64>>> {
    check_mu(mu)?;
    let s = state.total();
    let dim = s as usize + 1;
    if rates.len() != dim {
        return Err(Error::invalid("rates", format!("expected {dim} phase rates, got {}", rates.len())));
    }
    let u = overlap_matrix(s, mu)?;
    let uc = u.map(|x| Complex64::new(x, 0.0));
    let start = uc.row(state.s1 as usize).transpose();
    Ok(times
        .iter()
        .map(|&t| {
            let phases = DVector::from_iterator(dim, rates.iter().map(|&w| Complex64::new(0.0, -w * t).exp()));
            let evolved = &uc * start.component_mul(&phases);
            evolved.iter().map(|c| c.norm_sqr()).collect()
        })
        .collect())
}

/// Reference evolution with the linear gap `w_n = delta n`.
pub fn unitary_evolution_numeric(state: InitialState, mu: f64, delta: f64, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    let rates: Vec<f64> = (0..=state.total()).map(|n| delta * f64::from(n)).collect();
    unitary_evolution_with_rates(state, mu, &rates, times)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::coefficient;
    use std::f64::consts::PI;

    #[test]
    fn quadrature_overlaps_small_cases() {
        let rule = gauss_hermite(12).unwrap();
        for mu in [0.0, 0.3, 1.0] {
            let v = overlap_coefficient_numeric(0, 0, 0, 0, mu, &rule).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
            let v = overlap_coefficient_numeric(1, 1, 0, 1, mu, &rule).unwrap();
            assert!(v.abs() < 1e-12);
        }
        let v = overlap_coefficient_numeric(0, 1, 0, 1, 0.5, &rule).unwrap();
        assert!((v - 0.894_427_190_999_915_9).abs() < 1e-10);
        let v = overlap_coefficient_numeric(1, 0, 0, 1, 0.5, &rule).unwrap();
        assert!((v + 0.447_213_595_499_958).abs() < 1e-10);
    }

    #[test]
    fn quadrature_order_is_enforced() {
        let rule = gauss_hermite(9).unwrap();
        assert!(overlap_coefficient_numeric(2, 0, 2, 0, 0.5, &rule).is_err());
        assert!(overlap_coefficient_numeric(1, 0, 1, 0, 0.5, &rule).is_ok());
    }

    #[test]
    fn checked_overlap_matches_closed_form() {
        for (n, m, k) in [(2, 3, 1), (4, 0, 2), (3, 3, 6)] {
            let p = n + m - k;
            let v = overlap_coefficient_checked(n, m, k, p, 0.7).unwrap();
            let c = coefficient(n, m, k, p, 0.7).unwrap();
            assert!((v - c).abs() < 1e-12, "({n},{m},{k}): {v} vs {c}");
        }
    }

    #[test]
    fn rdm_product_and_binomial_cases() {
        let grid = GridSpec::for_quantum(3);
        let v = rdm_spectrum_numeric(0, 0, 0.4, &grid).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-10 && v[1].abs() < 1e-10);
        let v = rdm_spectrum_numeric(0, 3, 1.0, &grid).unwrap();
        for (got, want) in v.iter().zip([0.375, 0.375, 0.125, 0.125]) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        assert!(v[4..].iter().all(|x| x.abs() < 1e-8));
    }

    #[test]
    fn narrow_grid_is_flagged() {
        let grid = GridSpec::new(2.0, 64).unwrap();
        assert!(matches!(rdm_spectrum_numeric(4, 4, 0.5, &grid), Err(Error::GridInadequate(_))));
        assert!(GridSpec::new(3.0, 32).is_err());
        assert!(GridSpec::new(-1.0, 128).is_err());
    }

    #[test]
    fn svd_matches_rdm_route() {
        let grid = GridSpec::for_quantum(3);
        let a = rdm_spectrum_numeric(1, 2, 0.6, &grid).unwrap();
        let b = approximate_wavefunction_svd(1, 2, 0.6, &grid).unwrap();
        for (x, y) in a.iter().zip(&b).take(4) {
            assert!((x - y).abs() < 1e-7);
        }
    }

    #[test]
    fn uncoupled_exact_state_is_product() {
        let spec = CouplerSpec::unit_mass(1.0, 1.4, 0.0).unwrap();
        let v = exact_wavefunction_svd(spec, 2, 1, &GridSpec::for_quantum(2)).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reference_evolution_swap() {
        let state = InitialState::new(0, 1).unwrap();
        let out = unitary_evolution_numeric(state, 1.0, 1.0, &[0.0, PI]).unwrap();
        assert!((out[0][0] - 1.0).abs() < 1e-12 && out[0][1].abs() < 1e-12);
        assert!(out[1][0].abs() < 1e-12 && (out[1][1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_tracks_worst_case() {
        let mut r = ComparisonReport::new(1e-3);
        r.record(|| "a".into(), 1.0, 1.0001);
        r.record(|| "b".into(), 2.0, 2.01);
        r.record(|| "c".into(), 0.0, 0.0);
        assert_eq!(r.checks, 3);
        assert_eq!(r.worst_case.as_deref(), Some("b"));
        assert!(!r.passed);
        assert!((r.max_abs_error - 0.01).abs() < 1e-12);
        let mut ok = ComparisonReport::new(1.0);
        ok.record(|| "x".into(), 1.0, 1.5);
        assert!(ok.passed);
        ok.record(|| "nan".into(), 1.0, f64::NAN);
        assert!(!ok.passed);
    }
}
