//! The coupled-oscillator Hamiltonian
//! `H = (p1^2/m1 + p2^2/m2 + A x1^2 + B x2^2 + C x1 x2) / 2`
//! and its decoupled normal-mode form, in units with `hbar = 1`.

use crate::error::{Error, Result};

/// Masses and potential constants of the two coupled oscillators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerSpec {
    m1: f64,
    m2: f64,
    a: f64,
    b: f64,
    c: f64,
}

fn require_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and positive, got {v}")))
    }
}

impl CouplerSpec {
    /// Validates `m1, m2, A, B > 0` and the bound-state condition `4AB > C^2`.
    pub fn new(m1: f64, m2: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        require_positive("m1", m1)?;
        require_positive("m2", m2)?;
        require_positive("A", a)?;
        require_positive("B", b)?;
        if !c.is_finite() {
            return Err(Error::invalid("C", format!("must be finite, got {c}")));
        }
        let spec = Self { m1, m2, a, b, c };
        let disc = spec.discriminant();
        if disc <= 0.0 {
            return Err(Error::Unbound { discriminant: disc });
        }
        Ok(spec)
    }

    /// Unit masses.
    pub fn unit_mass(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(1.0, 1.0, a, b, c)
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }
    pub fn m2(&self) -> f64 {
        self.m2
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `4AB - C^2` with the masses scaled out.
    fn discriminant(&self) -> f64 {
        4.0 * self.a * self.b / (self.m1 * self.m2) - self.c * self.c / (self.m1 * self.m2)
    }

    pub fn is_canonical(&self) -> bool {
        self.m1 == 1.0 && self.m2 == 1.0
    }
}

/// Rescales to unit masses via mass-weighted coordinates `q_i = sqrt(m_i) x_i`:
/// `A -> A/m1`, `B -> B/m2`, `C -> C/sqrt(m1 m2)`.
///
/// The normal-mode frequencies are unchanged; when `m1 m2 = 1` this is the
/// familiar `A sqrt(m2/m1)`, `B sqrt(m1/m2)` rescaling.
pub fn canonicalize_masses(spec: CouplerSpec) -> Result<CouplerSpec> {
    require_positive("m1", spec.m1)?;
    require_positive("m2", spec.m2)?;
    if spec.is_canonical() {
        return Ok(spec);
    }
    CouplerSpec::new(
        1.0,
        1.0,
        spec.a / spec.m1,
        spec.b / spec.m2,
        spec.c / (spec.m1 * spec.m2).sqrt(),
    )
}

/// Parameters of the decoupled Hamiltonian
/// `H = (p1^2 + p2^2)/2 + (A' y1^2 + B' y2^2)/2`, with
/// `y1 = x1 cos(alpha) - x2 sin(alpha)` and `y2 = x1 sin(alpha) + x2 cos(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalForm {
    /// Canonical (unit-mass) system this form was computed from.
    pub spec: CouplerSpec,
    /// Detuning `(B - A)/C`; `None` when `C = 0`.
    pub epsilon: Option<f64>,
    /// Mixing parameter `tan(alpha)`, in `[-1, 1]`.
    pub mu: f64,
    pub alpha: f64,
    pub a_prime: f64,
    pub b_prime: f64,
    /// `sqrt(AB - C^2/4)`.
    pub k_param: f64,
    pub eta: f64,
}

/// Decouples the (canonicalized) system.
///
/// Conventions at the singular points: `C = 0` gives the identity rotation
/// (`mu = 0`); `A = B`, `C != 0` takes `mu = +1` and drops the sign term
/// from `e^eta`, giving `(A + B) / sqrt(4AB - C^2)`.
pub fn diagonalize(spec: CouplerSpec) -> Result<DiagonalForm> {
    let spec = canonicalize_masses(spec)?;
    let (a, b, c) = (spec.a, spec.b, spec.c);
    let disc = 4.0 * a * b - c * c;
    if disc <= 0.0 {
        return Err(Error::Unbound { discriminant: disc });
    }
    let det = a * b - 0.25 * c * c;
    let k_param = det.sqrt();

    let (epsilon, mu) = if c == 0.0 {
        (None, 0.0)
    } else {
        let eps = (b - a) / c;
        // sign(eps) sqrt(eps^2 + 1) - eps, rearranged to avoid cancellation.
        let sign = if eps < 0.0 { -1.0 } else { 1.0 };
        (Some(eps), sign / (eps.abs() + eps.hypot(1.0)))
    };
    let alpha = mu.atan();
    // The larger curvature is a sum of like-signed terms; the smaller one
    // follows from the determinant without cancellation.
    let (mut a_prime, mut b_prime) = (a - 0.5 * c * mu, b + 0.5 * c * mu);
    if a_prime >= b_prime {
        b_prime = det / a_prime;
    } else {
        a_prime = det / b_prime;
    }

    // e^eta = (A + B + sgn(A - B) sqrt((A-B)^2 + C^2)) / sqrt(4AB - C^2).
    let root = (a - b).hypot(c);
    let numerator = if a > b {
        a + b + root
    } else if a < b {
        disc / (a + b + root)
    } else {
        a + b
    };
    let eta = (numerator / disc.sqrt()).ln();

    Ok(DiagonalForm {
        spec,
        epsilon,
        mu,
        alpha,
        a_prime,
        b_prime,
        k_param,
        eta,
    })
}

/// An energy eigenvalue `E_{n,m}` of the decoupled system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub n: u32,
    pub m: u32,
    pub value: f64,
}

/// `E_{n,m} = sqrt(A') (n + 1/2) + sqrt(B') (m + 1/2)`.
pub fn energy(form: &DiagonalForm, n: u32, m: u32) -> EnergyLevel {
    let value =
        form.a_prime.sqrt() * (f64::from(n) + 0.5) + form.b_prime.sqrt() * (f64::from(m) + 0.5);
    EnergyLevel { n, m, value }
}

/// Coupling frequency `delta = C (eps + mu) / (sqrt(A') + sqrt(B'))`; zero for
/// an uncoupled system.
///
/// Computed as `((B - A) + C mu) / (sqrt(A') + sqrt(B'))`, which avoids forming
/// `eps`. Up to sign it is the exact level-spacing difference
/// `sqrt(B') - sqrt(A')`.
pub fn coupling_delta(form: &DiagonalForm) -> f64 {
    let spec = &form.spec;
    if spec.c == 0.0 {
        return 0.0;
    }
    ((spec.b - spec.a) + spec.c * form.mu) / (form.a_prime.sqrt() + form.b_prime.sqrt())
}

impl DiagonalForm {
    pub fn energy(&self, n: u32, m: u32) -> EnergyLevel {
        energy(self, n, m)
    }

    pub fn coupling_delta(&self) -> f64 {
        coupling_delta(self)
    }
}
