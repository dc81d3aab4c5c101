use thiserror::Error;

/// Errors shared by every solver and constructor in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is {rows}x{cols}, a square matrix is required")]
    NonSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: String },

    #[error("signed measure has nonzero total charge {charge:e}")]
    NonzeroCharge { charge: f64 },

    #[error("empty support")]
    EmptySupport,

    #[error("positions must be strictly increasing and inside [0, 1]: offender at index {index}")]
    BadPosition { index: usize },

    #[error("cost matrix failed the metric checks: {reason}")]
    NotMetric { reason: String },

    #[error("domain error: {reason}")]
    Domain { reason: String },

    #[error("resource cap exceeded: {reason}")]
    ResourceCap { reason: String },

    #[error("no measure-preserving map is available for the requested pair: {reason}")]
    UnsupportedPair { reason: String },

    #[error("plan violates marginal constraints: {reason}")]
    InfeasiblePlan { reason: String },

    #[error("pivoting stalled after {pivots} pivots")]
    SolverStall { pivots: usize },

    #[error("linear system is singular: {reason}")]
    Singular { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(reason: impl Into<String>) -> Self {
        Error::Domain { reason: reason.into() }
    }

    pub fn invalid(reason: impl Into<String>) -> Self {
        Error::InvalidDistribution { reason: reason.into() }
    }
}
