use thiserror::Error;

/// Errors produced by the model, the closed forms and the numeric oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// 4AB - C^2 <= 0 (after mass canonicalization).
    #[error("unbound system: 4AB - C^2 = {discriminant} must be positive")]
    Unbound { discriminant: f64 },

    /// A closed form failed its own internal consistency check.
    #[error("numerical consistency failure: {0}")]
    NumericalConsistency(String),

    /// An iterative or refinement procedure did not settle.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// The spatial grid is too small or too coarse for the requested state.
    #[error("inadequate grid: {0}")]
    GridInadequate(String),

    /// A single point of a sweep failed.
    #[error("at mu = {mu}: {source}")]
    SweepPoint {
        mu: f64,
        #[source]
        source: Box<Error>,
    },

    /// A single point of a time grid failed.
    #[error("at t = {t}: {source}")]
    TimePoint {
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NumericalConsistency(_) | Error::Convergence(_) | Error::GridInadequate(_) => {
                true
            }
            Error::SweepPoint { source, .. } | Error::TimePoint { source, .. } => {
                source.is_numerical()
            }
            Error::InvalidParameter { .. } | Error::Unbound { .. } => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
