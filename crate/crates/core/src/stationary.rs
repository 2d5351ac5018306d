//! Schmidt decomposition of the stationary eigenstates in the weak-coupling
//! approximation, where both normal modes share the uncoupled frequency and
//! the eigenstate is the rotated product `psi_n(y1) psi_m(y2)`.
//!
//! The expansion coefficients onto the uncoupled basis are
//!
//! ```text
//! A^{k,p}_{n,m} = mu^(k+n) sqrt(m! n!) / ((1 + mu^2)^((n+m)/2) sqrt(k! p!))
//!                 * P_n^{(-(1+m+n), m-k)}(-(2 + mu^2) / mu^2),      k + p = n + m,
//! ```
//!
//! and the Schmidt modes are `lambda_k = (A^{k, n+m-k}_{n,m})^2`.

use crate::error::{Error, Result};
use crate::special::ddouble::DoubleDouble;
use crate::special::{
    binomial_exact, compensated_sum, hyp2f1_terminating, jacobi, log_binomial, log_factorial,
};

/// Default cap on `n + m` (and on `s1 + s2` for the dynamics).
pub const DEFAULT_MAX_QUANTUM_SUM: u32 = 64;

/// Largest `n + m` for which the coefficient terms are formed from exact
/// 64-bit binomials in double-double arithmetic. Beyond it the terms are built
/// by a ratio recurrence around the largest term.
const EXACT_TERMS_MAX: u32 = 64;

/// Hard ceiling on `n + m` for a single coefficient.
const COEFFICIENT_MAX_QUANTUM_SUM: u64 = 4096;

/// Allowed `|sum lambda - 1|` before renormalization is refused.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;

/// Quantum numbers `(n, m)` of the decoupled modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub n: u32,
    pub m: u32,
}

impl ModeIndex {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        Self::with_limit(n, m, DEFAULT_MAX_QUANTUM_SUM)
    }

    pub fn with_limit(n: u32, m: u32, limit: u32) -> Result<Self> {
        match n.checked_add(m) {
            Some(total) if total <= limit => Ok(Self { n, m }),
            _ => Err(Error::invalid(
                "n + m",
                format!("n + m = {} exceeds the limit {limit}", u64::from(n) + u64::from(m)),
            )),
        }
    }

    pub fn total(&self) -> u32 {
        self.n + self.m
    }
}

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if mu.is_finite() && mu.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("mu", format!("|mu| must be <= 1, got {mu}")))
    }
}

/// Sign of `(-1)^e`.
fn parity(e: u32) -> f64 {
    if e % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The Jacobi polynomial of the coefficient formula expanded about `x = -1`.
///
/// With `b = -(1+m+n)`, `c = m-k` and `x = -(2+mu^2)/mu^2` the prefactor and
/// polynomial combine into the finite sum
///
/// `sum_j (-1)^(n+j) sqrt(C(n,j) C(k,j) C(m,k-j) C(p,n-j)) c^(n+m) mu^(k+n-2j)`,
///
/// `c = 1/sqrt(1+mu^2)`, `max(0, k-m) <= j <= min(n, k)`. Every power of `mu`
/// is non-negative, so the sum is regular at `mu = 0`, and the binomials stay
/// bounded by `2^(n+m)` instead of growing like `mu^(-2n)`.
fn coefficient_terms(n: u32, m: u32, k: u32) -> impl Iterator<Item = (u32, u32)> {
    let lo = k.saturating_sub(m);
    let hi = n.min(k);
    (lo..=hi).map(move |j| (j, k + n - 2 * j))
}

fn coefficient_dd(n: u32, m: u32, k: u32, p: u32, mu: f64) -> DoubleDouble {
    let total = n + m;
    let mu_sign = if mu < 0.0 { parity(k + n) } else { 1.0 };
    let mu2 = DoubleDouble::square_of(mu);
    let cos2 = DoubleDouble::ONE / (DoubleDouble::ONE + mu2);
    let cos2_pow = cos2.powi(total);
    let mut acc = DoubleDouble::ZERO;
    for (j, mu_exp) in coefficient_terms(n, m, k) {
        if mu == 0.0 && mu_exp > 0 {
            continue;
        }
        let binoms = [(n, j), (k, j), (m, k - j), (p, n - j)]
            .map(|(a, b)| DoubleDouble::from_u64(binomial_exact(a, b).expect("n + m <= 64")));
        let product = binoms.into_iter().fold(DoubleDouble::ONE, |x, y| x * y);
        // mu^(2e) enters under the square root as (mu^2)^e.
        let magnitude = (product * cos2_pow * mu2.powi(mu_exp)).sqrt();
        let term = if parity(n + j) > 0.0 {
            magnitude
        } else {
            -magnitude
        };
        acc = acc + term;
    }
    if mu_sign < 0.0 {
        -acc
    } else {
        acc
    }
}

/// Same sum for large `n + m`, where the binomials no longer fit in a `u64`.
///
/// Terms are generated relative to the largest one through the exact ratio
/// of consecutive squared terms,
/// `(n-j+1)^2 (k-j+1)^2 / (j^2 (m-k+j) (p-n+j) mu^4)`, in double-double
/// arithmetic. Only the common scale factor goes through logarithms, so the
/// cancellation between terms sees double-double relative errors.
fn coefficient_scaled(n: u32, m: u32, k: u32, p: u32, mu: f64) -> f64 {
    if mu == 0.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let (lo, hi) = (k.saturating_sub(m), n.min(k));
    let ln_mu = mu.abs().ln();
    let ln_square = |j: u32| {
        log_binomial(n.into(), j.into())
            + log_binomial(k.into(), j.into())
            + log_binomial(m.into(), (k - j).into())
            + log_binomial(p.into(), (n - j).into())
            - 4.0 * f64::from(j) * ln_mu
    };
    let peak = (lo..=hi)
        .max_by(|&a, &b| ln_square(a).total_cmp(&ln_square(b)))
        .expect("non-empty term range");

    let mu2 = DoubleDouble::square_of(mu);
    let mu4 = mu2 * mu2;
    let ratio = |j: u32| {
        let (a, b) = (u64::from(n - j + 1), u64::from(k - j + 1));
        let num = DoubleDouble::from_u64(a * a) * DoubleDouble::from_u64(b * b);
        let den = DoubleDouble::from_u64(u64::from(j) * u64::from(j))
            * DoubleDouble::from_u64(u64::from(m + j - k) * u64::from(p + j - n));
        num / (den * mu4)
    };
    const NEGLIGIBLE: f64 = 1e-70;
    let signed = |j: u32, square: DoubleDouble| {
        let t = square.sqrt();
        if parity(n + j) > 0.0 {
            t
        } else {
            -t
        }
    };
    let mut acc = signed(peak, DoubleDouble::ONE);
    let mut square = DoubleDouble::ONE;
    for j in peak + 1..=hi {
        square = square * ratio(j);
        if square.to_f64() < NEGLIGIBLE {
            break;
        }
        acc = acc + signed(j, square);
    }
    square = DoubleDouble::ONE;
    for j in (lo + 1..=peak).rev() {
        square = square / ratio(j);
        if square.to_f64() < NEGLIGIBLE {
            break;
        }
        acc = acc + signed(j - 1, square);
    }

    let ln_cos = -0.5 * (mu * mu).ln_1p();
    let ln_scale = 0.5 * ln_square(peak)
        + f64::from(k + n) * ln_mu
        + f64::from(n + m) * ln_cos;
    let mu_sign = if mu < 0.0 { parity(k + n) } else { 1.0 };
    mu_sign * acc.to_f64() * ln_scale.exp()
}

/// Expansion coefficient `A^{k,p}_{n,m}` of the eigenstate `|n, m>` onto the
/// uncoupled product state `|k>|p>`; exactly zero unless `k + p = n + m`.
pub fn coefficient(n: u32, m: u32, k: u32, p: u32, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let total = u64::from(n) + u64::from(m);
    if total > COEFFICIENT_MAX_QUANTUM_SUM {
        return Err(Error::invalid(
            "n + m",
            format!("n + m = {total} exceeds {COEFFICIENT_MAX_QUANTUM_SUM}"),
        ));
    }
    if u64::from(k) + u64::from(p) != total {
        return Ok(0.0);
    }
    if n + m <= EXACT_TERMS_MAX {
        Ok(coefficient_dd(n, m, k, p, mu).to_f64())
    } else {
        Ok(coefficient_scaled(n, m, k, p, mu))
    }
}

/// The same coefficient evaluated literally: prefactor times
/// [`jacobi`] at `x = -(2 + mu^2)/mu^2`.
///
/// Kept as an independent algebraic route for cross-checks. It loses all
/// accuracy as `mu -> 0` (the polynomial terms grow like `mu^(-2n)` and
/// cancel) and is undefined at `mu = 0`.
pub fn coefficient_via_jacobi(n: u32, m: u32, k: u32, p: u32, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    if mu == 0.0 {
        return Err(Error::invalid("mu", "the Jacobi route is singular at mu = 0"));
    }
    if u64::from(k) + u64::from(p) != u64::from(n) + u64::from(m) {
        return Ok(0.0);
    }
    let ln_pref = 0.5
        * (log_factorial(m.into()) + log_factorial(n.into())
            - log_factorial(k.into())
            - log_factorial(p.into()))
        - 0.5 * f64::from(n + m) * (mu * mu).ln_1p();
    let x = -(2.0 + mu * mu) / (mu * mu);
    let poly = jacobi(n, -f64::from(1 + m + n), f64::from(m) - f64::from(k), x);
    Ok(mu.powi((k + n) as i32) * ln_pref.exp() * poly)
}

/// Schmidt modes `lambda_0..=lambda_{n+m}`, indexed by the occupation `k` of
/// oscillator 1 (oscillator 2 then holds `n + m - k`).
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    pub lambdas: Vec<f64>,
    pub mu: f64,
    pub source: ModeIndex,
}

impl SchmidtSpectrum {
    pub fn entanglement(&self) -> EntanglementReport {
        entanglement(self)
    }
}

/// Unnormalized `lambda_k = (A^{k, n+m-k}_{n,m})^2` straight from the closed form.
pub fn raw_schmidt_modes(n: u32, m: u32, mu: f64) -> Result<Vec<f64>> {
    check_mu(mu)?;
    if u64::from(n) + u64::from(m) > COEFFICIENT_MAX_QUANTUM_SUM {
        return Err(Error::invalid(
            "n + m",
            format!("n + m exceeds {COEFFICIENT_MAX_QUANTUM_SUM}"),
        ));
    }
    let total = n + m;
    if total <= EXACT_TERMS_MAX {
        Ok((0..=total)
            .map(|k| {
                let a = coefficient_dd(n, m, k, total - k, mu);
                (a * a).to_f64()
            })
            .collect())
    } else {
        Ok((0..=total)
            .map(|k| coefficient_scaled(n, m, k, total - k, mu).powi(2))
            .collect())
    }
}

/// Schmidt spectrum of `|n, m>`. The raw modes are divided by their sum when it
/// is within [`NORMALIZATION_TOLERANCE`] of one; otherwise this is reported as
/// a numerical failure.
pub fn schmidt_spectrum(n: u32, m: u32, mu: f64) -> Result<SchmidtSpectrum> {
    let source = ModeIndex::new(n, m)?;
    let raw = raw_schmidt_modes(n, m, mu)?;
    let sum = compensated_sum(raw.iter().copied());
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NumericalConsistency(format!(
            "Schmidt modes of |{n},{m}> at mu = {mu} sum to {sum}"
        )));
    }
    let lambdas = raw.into_iter().map(|l| (l / sum).min(1.0)).collect();
    Ok(SchmidtSpectrum {
        lambdas,
        mu,
        source,
    })
}

/// Von Neumann entropy (natural log) and Schmidt parameter of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    pub entropy: f64,
    pub schmidt_k: f64,
}

/// `S = -sum lambda ln lambda` with `0 ln 0 = 0`.
pub fn von_neumann_entropy(lambdas: &[f64]) -> f64 {
    let s = compensated_sum(
        lambdas
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| -l * l.ln()),
    );
    s.max(0.0)
}

/// Inverse purity `K = 1 / sum lambda^2`.
pub fn schmidt_number(lambdas: &[f64]) -> f64 {
    1.0 / compensated_sum(lambdas.iter().map(|l| l * l))
}

pub fn entanglement(spectrum: &SchmidtSpectrum) -> EntanglementReport {
    EntanglementReport {
        entropy: von_neumann_entropy(&spectrum.lambdas),
        schmidt_k: schmidt_number(&spectrum.lambdas),
    }
}

/// Closed form `K = (1 + mu^2)^(2m) / 2F1(-m, -m; 1; mu^4)` for the states
/// `|0, m>`.
pub fn schmidt_k_closed_form(m: u32, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let mu2 = mu * mu;
    Ok((1.0 + mu2).powi(2 * m as i32) / hyp2f1_terminating(m, mu2 * mu2))
}

/// One row of a mixing-parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub mu: f64,
    pub entropy: f64,
    pub schmidt_k: f64,
}

/// Entanglement of `|n, m>` at each `mu` of the grid, in grid order.
///
/// By evenness in `mu` the grid is restricted to `(0, 1]`.
pub fn sweep_mu(n: u32, m: u32, mu_grid: &[f64]) -> Result<Vec<SweepRow>> {
    ModeIndex::new(n, m)?;
    mu_grid
        .iter()
        .map(|&mu| {
            let point = || -> Result<SweepRow> {
                if !(mu > 0.0 && mu <= 1.0) {
                    return Err(Error::invalid("mu", format!("sweep values must lie in (0, 1], got {mu}")));
                }
                let report = schmidt_spectrum(n, m, mu)?.entanglement();
                Ok(SweepRow {
                    mu,
                    entropy: report.entropy,
                    schmidt_k: report.schmidt_k,
                })
            };
            point().map_err(|e| Error::SweepPoint {
                mu,
                source: Box::new(e),
            })
        })
        .collect()
}
