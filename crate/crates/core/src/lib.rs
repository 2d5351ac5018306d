//! Schmidt modes and entanglement of two coupled quantum harmonic oscillators.
//!
//! The system is `H = (p1^2/m1 + p2^2/m2 + A x1^2 + B x2^2 + C x1 x2) / 2`
//! with `hbar = 1`. [`model`] rotates it into normal modes, [`stationary`]
//! gives the Schmidt spectrum of each eigenstate in closed form, [`dynamics`]
//! evolves an uncoupled product state, and [`oracle`] holds slow numerical
//! cross-checks for all of it.
//!
//! ```
//! use schmidt_osc_core::{diagonalize, schmidt_spectrum, CouplerSpec};
//!
//! let form = diagonalize(CouplerSpec::unit_mass(1.0, 1.0, 0.01)?)?;
//! let spectrum = schmidt_spectrum(0, 3, form.mu)?;
//! assert!((spectrum.lambdas[1] - 0.375).abs() < 1e-12);
//! # Ok::<(), schmidt_osc_core::Error>(())
//! ```

pub mod dynamics;
pub mod error;
pub mod model;
pub mod oracle;
pub mod special;
pub mod stationary;

pub use dynamics::{
    entropy_vs_delta_t, evolve, evolved_coefficient, initial_amplitudes, EvolutionMode,
    EvolutionTrace, Evolver, InitialState,
};
pub use error::{Error, Result};
pub use model::{canonicalize_masses, coupling_delta, diagonalize, energy, CouplerSpec, DiagonalForm, EnergyLevel};
pub use oracle::{ComparisonReport, GridSpec};
pub use special::{gauss_hermite, QuadratureRule};
pub use stationary::{
    coefficient, entanglement, schmidt_k_closed_form, schmidt_number, schmidt_spectrum, sweep_mu,
    von_neumann_entropy, EntanglementReport, ModeIndex, SchmidtSpectrum, SweepRow,
};
