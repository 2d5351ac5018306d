//! Gauss-Hermite quadrature for the weight `e^(-x^2)` on the real line.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest supported rule. Newton refinement on the normalized recurrence is
/// reliable up to here in double precision.
pub const MAX_QUADRATURE_ORDER: usize = 256;

const NEWTON_MAX_ITER: usize = 100;

/// Nodes and weights of a Gauss-Hermite rule.
///
/// Nodes are strictly increasing and exactly symmetric about zero; an odd
/// rule has an exact zero node.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Approximates the integral of `e^(-x^2) f(x)` over the real line.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// Normalized Hermite recurrence at `x`; returns `(p_order(x), p_{order-1}(x))`
/// with `p_k = H_k / sqrt(2^k k! sqrt(pi))`.
fn normalized_pair(order: usize, x: f64) -> (f64, f64) {
    let mut p1 = std::f64::consts::PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 0..order {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = x * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
    }
    (p1, p2)
}

/// Builds the `order`-point Gauss-Hermite rule.
///
/// Starting values are the eigenvalues of the symmetric Jacobi matrix of the
/// Hermite recurrence; each root is then polished by Newton iteration on the
/// normalized recurrence, which also supplies the weights.
pub fn gauss_hermite(order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_QUADRATURE_ORDER {
        return Err(Error::invalid(
            "order",
            format!("quadrature order {order} outside 1..={MAX_QUADRATURE_ORDER}"),
        ));
    }
    let n = order;
    let nf = n as f64;
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    guesses.sort_by(|a, b| b.total_cmp(a));

    // Positive roots, largest first.
    let half = n.div_ceil(2);
    let mut roots = Vec::with_capacity(half);
    let mut weights = Vec::with_capacity(half);
    for (i, &guess) in guesses.iter().take(half).enumerate() {
        let mut z = guess;
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p_prev) = normalized_pair(n, z);
            let derivative = (2.0 * nf).sqrt() * p_prev;
            let step = p / derivative;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!(
                "Gauss-Hermite root {i} of order {n} did not settle"
            )));
        }
        if n % 2 == 1 && i == half - 1 {
            z = 0.0;
        }
        let (_, p_prev) = normalized_pair(n, z);
        let derivative = (2.0 * nf).sqrt() * p_prev;
        roots.push(z);
        weights.push(2.0 / (derivative * derivative));
    }

    let mut nodes = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for (&x, &wt) in roots.iter().zip(&weights) {
        if x != 0.0 {
            nodes.push(-x);
            w.push(wt);
        }
    }
    for (&x, &wt) in roots.iter().zip(&weights).rev() {
        nodes.push(x);
        w.push(wt);
    }
    debug_assert_eq!(nodes.len(), n);

    if nodes.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Convergence(format!(
            "Gauss-Hermite order {n}: Newton iterations merged two roots"
        )));
    }
    Ok(QuadratureRule { nodes, weights: w })
}
