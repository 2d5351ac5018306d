//! Time evolution of an uncoupled product state `|s1>|s2>` under the coupled
//! Hamiltonian, and its time-dependent Schmidt modes.
//!
//! The state is expanded in the decoupled eigenstates `|n, s - n>`
//! (`s = s1 + s2`), each picks up a phase `e^{-i w_n t}`, and is projected back
//! onto the uncoupled basis:
//!
//! ```text
//! c_{k, s-k}(t) = sum_n A^{s1,s2}_{n,s-n} A^{k,s-k}_{n,s-n} e^{-i w_n t},
//! lambda_k(t)   = |c_{k, s-k}(t)|^2.
//! ```
//!
//! `w_n` is either the exact gap `E_{n,s-n} - sqrt(A)(s1 + 1/2) - sqrt(B)(s2 + 1/2)`
//! or its linearization `delta * n`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{energy, DiagonalForm};
use crate::special::compensated_sum;
use crate::stationary::{check_mu, coefficient, von_neumann_entropy, DEFAULT_MAX_QUANTUM_SUM};

/// Tolerance on `sum_k lambda_k(t) = 1`.
pub const UNITARITY_TOLERANCE: f64 = 1e-9;

/// Occupations of the two uncoupled oscillators at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InitialState {
    pub s1: u32,
    pub s2: u32,
}

impl InitialState {
    pub fn new(s1: u32, s2: u32) -> Result<Self> {
        match s1.checked_add(s2) {
            Some(total) if total <= DEFAULT_MAX_QUANTUM_SUM => Ok(Self { s1, s2 }),
            _ => Err(Error::invalid(
                "s1 + s2",
                format!("must not exceed {DEFAULT_MAX_QUANTUM_SUM}"),
            )),
        }
    }

    pub fn total(&self) -> u32 {
        self.s1 + self.s2
    }
}

/// Which phase rates drive the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolutionMode {
    /// `w_n = E_{n,s-n} - sqrt(A)(s1 + 1/2) - sqrt(B)(s2 + 1/2)`.
    ExactGap,
    /// `w_n = delta * n`.
    LinearGap,
}

impl EvolutionMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvolutionMode::ExactGap => "exact",
            EvolutionMode::LinearGap => "delta",
        }
    }
}

/// Amplitudes `a_n = A^{s1,s2}_{n, s-n}` of the initial state in the
/// decoupled eigenbasis, `n = 0..=s`.
pub fn initial_amplitudes(state: InitialState, mu: f64) -> Result<Vec<f64>> {
    let s = state.total();
    (0..=s)
        .map(|n| coefficient(n, s - n, state.s1, state.s2, mu))
        .collect()
}

/// Phase rates `w_n` for `n = 0..=s`.
pub fn phase_rates(state: InitialState, form: &DiagonalForm, mode: EvolutionMode) -> Vec<f64> {
    let s = state.total();
    match mode {
        EvolutionMode::LinearGap => {
            let delta = form.coupling_delta();
            (0..=s).map(|n| delta * f64::from(n)).collect()
        }
        EvolutionMode::ExactGap => {
            let offset = form.spec.a().sqrt() * (f64::from(state.s1) + 0.5)
                + form.spec.b().sqrt() * (f64::from(state.s2) + 0.5);
            (0..=s).map(|n| energy(form, n, s - n).value - offset).collect()
        }
    }
}

/// Precomputed amplitudes and overlap matrix for one initial state.
#[derive(Debug, Clone)]
pub struct Evolver {
    state: InitialState,
    mu: f64,
    amplitudes: Vec<f64>,
    /// `overlaps[k * (s + 1) + n] = A^{k, s-k}_{n, s-n}`.
    overlaps: Vec<f64>,
    rates: Vec<f64>,
}

impl Evolver {
    /// Evolver with caller-supplied phase rates (`rates.len() == s1 + s2 + 1`).
    pub fn new(state: InitialState, mu: f64, rates: Vec<f64>) -> Result<Self> {
        check_mu(mu)?;
        let s = state.total();
        let dim = s as usize + 1;
        if rates.len() != dim {
            return Err(Error::invalid(
                "rates",
                format!("expected {dim} phase rates, got {}", rates.len()),
            ));
        }
        if let Some(bad) = rates.iter().find(|w| !w.is_finite()) {
            return Err(Error::invalid("rates", format!("non-finite phase rate {bad}")));
        }
        let mut overlaps = Vec::with_capacity(dim * dim);
        for k in 0..=s {
            for n in 0..=s {
                overlaps.push(coefficient(n, s - n, k, s - k, mu)?);
            }
        }
        let amplitudes = overlaps[state.s1 as usize * dim..(state.s1 as usize + 1) * dim].to_vec();
        Ok(Self {
            state,
            mu,
            amplitudes,
            overlaps,
            rates,
        })
    }

    /// Linearized gap `w_n = delta * n`. With `delta = 1` the time axis is the
    /// dimensionless `delta * t`.
    pub fn linear(state: InitialState, mu: f64, delta: f64) -> Result<Self> {
        let rates = (0..=state.total()).map(|n| delta * f64::from(n)).collect();
        Self::new(state, mu, rates)
    }

    pub fn from_form(state: InitialState, form: &DiagonalForm, mode: EvolutionMode) -> Result<Self> {
        Self::new(state, form.mu, phase_rates(state, form, mode))
    }

    pub fn state(&self) -> InitialState {
        self.state
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// `c_{k, s-k}(t)`.
    pub fn amplitude(&self, k: u32, t: f64) -> Complex64 {
        let dim = self.amplitudes.len();
        let k = k as usize;
        if k >= dim {
            return Complex64::new(0.0, 0.0);
        }
        let row = &self.overlaps[k * dim..(k + 1) * dim];
        let mut re = crate::special::CompensatedSum::new();
        let mut im = crate::special::CompensatedSum::new();
        for ((&a, &u), &w) in self.amplitudes.iter().zip(row).zip(&self.rates) {
            let weight = a * u;
            let (sin, cos) = (w * t).sin_cos();
            re.add(weight * cos);
            im.add(-weight * sin);
        }
        Complex64::new(re.value(), im.value())
    }

    /// `lambda_k(t)` for `k = 0..=s`, without any normalization.
    pub fn spectrum(&self, t: f64) -> Vec<f64> {
        (0..self.amplitudes.len() as u32)
            .map(|k| self.amplitude(k, t).norm_sqr())
            .collect()
    }

    /// Spectra and entropies over a time grid; each time is checked for
    /// unitarity, then round-off above one is clipped.
    pub fn trace(&self, times: &[f64], mode: EvolutionMode) -> Result<EvolutionTrace> {
        check_time_grid(times)?;
        let mut spectra = Vec::with_capacity(times.len());
        let mut entropies = Vec::with_capacity(times.len());
        for &t in times {
            let mut lambdas = self.spectrum(t);
            let sum = compensated_sum(lambdas.iter().copied());
            if (sum - 1.0).abs() > UNITARITY_TOLERANCE {
                return Err(Error::TimePoint {
                    t,
                    source: Box::new(Error::NumericalConsistency(format!(
                        "Schmidt modes sum to {sum}"
                    ))),
                });
            }
            lambdas.iter_mut().for_each(|l| *l = l.min(1.0));
            entropies.push(von_neumann_entropy(&lambdas));
            spectra.push(lambdas);
        }
        Ok(EvolutionTrace {
            times: times.to_vec(),
            spectra,
            entropies,
            mode,
        })
    }
}

fn check_time_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::invalid("time grid", "must not be empty"));
    }
    if let Some(&t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::invalid("time grid", format!("times must be finite and >= 0, got {t}")));
    }
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("time grid", "times must be strictly increasing"));
    }
    Ok(())
}

/// Time-dependent Schmidt spectra of an evolved product state.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    /// `spectra[i][k] = lambda_k(times[i])`.
    pub spectra: Vec<Vec<f64>>,
    pub entropies: Vec<f64>,
    pub mode: EvolutionMode,
}

/// Single amplitude `c_{k,p}(t)`; exactly zero unless `k + p = s1 + s2`.
pub fn evolved_coefficient(
    k: u32,
    p: u32,
    t: f64,
    state: InitialState,
    form: &DiagonalForm,
    mode: EvolutionMode,
) -> Result<Complex64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    if u64::from(k) + u64::from(p) != u64::from(state.total()) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(Evolver::from_form(state, form, mode)?.amplitude(k, t))
}

/// Evolves `state` under the system `form` over `times` (physical time).
pub fn evolve(
    state: InitialState,
    form: &DiagonalForm,
    times: &[f64],
    mode: EvolutionMode,
) -> Result<EvolutionTrace> {
    Evolver::from_form(state, form, mode)?.trace(times, mode)
}

/// `S(delta t)` in the linearized model on a dimensionless grid in `[0, 2 pi]`
/// (one period).
pub fn entropy_vs_delta_t(
    state: InitialState,
    mu: f64,
    delta_t_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if let Some(&x) = delta_t_grid
        .iter()
        .find(|&&x| !(0.0..=std::f64::consts::TAU).contains(&x))
    {
        return Err(Error::invalid("delta t", format!("grid values must lie in [0, 2 pi], got {x}")));
    }
    let trace = Evolver::linear(state, mu, 1.0)?.trace(delta_t_grid, EvolutionMode::LinearGap)?;
    Ok(trace.times.into_iter().zip(trace.entropies).collect())
}
