//! Error type shared by all modules.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate path: {0}")]
    DegeneratePath(String),

    #[error("point outside domain: {0}")]
    OutsideDomain(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("integration did not converge: last two sums {prev} and {last}")]
    IntegrationDidNotConverge { prev: f64, last: f64 },

    #[error("power iteration did not converge after {iters} iterations")]
    PowerIterationDiverged { iters: usize },

    #[error("pole hit evaluating operator monotone function: atom t_i={atom} at t={t}")]
    PoleHit { atom: f64, t: f64 },

    #[error("grid oracle: {0}")]
    GridOracle(String),

    #[error("unknown label: {0}")]
    UnknownLabel(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a numerical procedure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::IntegrationDidNotConverge { .. }
                | Error::PowerIterationDiverged { .. }
                | Error::NonFinite(_)
                | Error::GridOracle(_)
        )
    }
}
