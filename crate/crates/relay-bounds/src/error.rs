//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by parameter validation, optimization and file handling.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar input is outside its allowed range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },

    /// No grid point satisfied the feasibility predicate.
    #[error("no feasible point in the search box")]
    EmptyFeasibleSet,

    /// The objective returned NaN or infinity; signals a formula-domain bug upstream.
    #[error("objective is not finite at {point:?}")]
    NonFiniteObjective { point: Vec<f64> },

    /// Tensor or kernel dimensions do not agree.
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        got: usize,
    },

    /// A probability array fails non-negativity or normalization.
    #[error("not a probability distribution: {0}")]
    NotStochastic(String),

    /// Search invoked with zero restarts.
    #[error("search budget must be at least 1 restart")]
    ZeroBudget,

    /// A condition the formulas guarantee impossible was observed.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}
