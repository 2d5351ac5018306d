//! Parameter sets shared by the benchmarks and the acceptance run.

/// Eigenstates `(n, m)` used for the entanglement-versus-mu sweeps.
pub const SWEEP_STATES: [(u32, u32); 4] = [(0, 1), (0, 3), (5, 5), (10, 10)];

/// Initial product states `(s1, s2)` used for the time evolution runs.
pub const EVOLUTION_STATES: [(u32, u32); 4] = [(0, 10), (5, 10), (10, 10), (20, 10)];

/// Mixing parameters used with [`EVOLUTION_STATES`].
pub const EVOLUTION_MUS: [f64; 5] = [1.0, 0.75, 0.5, 0.1, 0.01];

/// `steps` evenly spaced points on `[lo, hi]`, both ends included.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

/// `steps` points on `[0, period)`.
pub fn periodic_grid(period: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|i| period * i as f64 / steps as f64).collect()
}
