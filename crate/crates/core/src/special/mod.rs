//! Special-function kernels: Hermite and Jacobi polynomials, the terminating
//! `2F1(-m, -m; 1; x)` series, factorials and binomials, Gauss-Hermite rules.

pub(crate) mod ddouble;
mod quadrature;

use std::sync::OnceLock;

pub use quadrature::{gauss_hermite, QuadratureRule, MAX_QUADRATURE_ORDER};

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Compensated sum of an iterator of doubles.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(iter);
    acc.value()
}

/// Physicists' Hermite polynomial `H_n(x)` via
/// `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_k(x) / sqrt(2^k k! sqrt(pi))` for `k = 0..=n_max`, without the Gaussian
/// factor. Multiplying by `e^(-x^2/2)` gives the normalized oscillator
/// eigenfunctions.
pub fn hermite_normalized(n_max: u32, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(std::f64::consts::PI.powf(-0.25));
    if n_max >= 1 {
        out.push(std::f64::consts::SQRT_2 * x * out[0]);
    }
    for k in 1..n_max as usize {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Normalized oscillator eigenfunctions `psi_k(x)`, `k = 0..=n_max`, for unit
/// frequency and mass.
pub fn hermite_functions(n_max: u32, x: f64) -> Vec<f64> {
    let g = (-0.5 * x * x).exp();
    let mut v = hermite_normalized(n_max, x);
    v.iter_mut().for_each(|h| *h *= g);
    v
}

/// Generalized binomial coefficient `(u choose r)` as the product
/// `prod_{j=1}^{r} (u - j + 1) / j`; valid for any real `u`, including
/// negative integers.
pub fn binomial_real(u: f64, r: u32) -> f64 {
    (1..=r).fold(1.0, |acc, j| acc * (u - f64::from(j) + 1.0) / f64::from(j))
}

/// Exact `(n choose k)` when it fits in a `u64`.
pub fn binomial_exact(n: u32, k: u32) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // Each partial product is itself a binomial, so the division is exact.
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    u64::try_from(acc).ok()
}

/// Jacobi polynomial `P_a^{(b, c)}(x)` from the finite sum
///
/// `sum_{s=0}^{a} (a+b choose a-s) (a+c choose s) ((x-1)/2)^s ((x+1)/2)^(a-s)`,
///
/// with the binomials in product form so negative integer parameters are
/// admissible. Accurate when `|x|` is moderate; for `x` near `-1/mu^2` with
/// small `mu` the terms cancel catastrophically and the expansion
/// coefficients use a rearranged form instead.
pub fn jacobi(degree: u32, b: f64, c: f64, x: f64) -> f64 {
    let a = f64::from(degree);
    let u = 0.5 * (x - 1.0);
    let v = 0.5 * (x + 1.0);
    compensated_sum((0..=degree).map(|s| {
        binomial_real(a + b, degree - s)
            * binomial_real(a + c, s)
            * u.powi(s as i32)
            * v.powi((degree - s) as i32)
    }))
}

/// Terminating Gauss series `2F1(-m, -m; 1; x) = sum_j (m choose j)^2 x^j`.
pub fn hyp2f1_terminating(m: u32, x: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut binom = 1.0_f64;
    let mut xp = 1.0_f64;
    for j in 0..=m {
        acc.add(binom * binom * xp);
        binom = binom * f64::from(m - j) / f64::from(j + 1);
        xp *= x;
    }
    acc.value()
}

const LN_FACTORIAL_TABLE_MAX: usize = 256;

fn ln_factorial_table() -> &'static [f64; LN_FACTORIAL_TABLE_MAX + 1] {
    static TABLE: OnceLock<[f64; LN_FACTORIAL_TABLE_MAX + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; LN_FACTORIAL_TABLE_MAX + 1];
        let mut acc = CompensatedSum::new();
        for (k, slot) in t.iter_mut().enumerate().skip(1) {
            acc.add((k as f64).ln());
            *slot = acc.value();
        }
        t
    })
}

/// `ln(n!)`: a compensated running sum of `ln k` up to 256, Stirling's series
/// beyond (truncation error below 1e-20 there).
pub fn log_factorial(n: u64) -> f64 {
    if let Some(&v) = ln_factorial_table().get(n as usize) {
        return v;
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (std::f64::consts::TAU * x).ln() + series
}

/// `ln (n choose k)`; `-inf` when `k > n`.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}
