//! Error type shared by the geometric kernels.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("coordinate {index} = {value} lies outside the chart domain [{lo}, {hi}]")]
    DomainViolation {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("chart Jacobian is rank-deficient: smallest singular value {sigma:.3e} < {tol:.3e}")]
    RankDeficient { sigma: f64, tol: f64 },

    #[error("operands are based at different points (separation {distance:.3e})")]
    BasePointMismatch { distance: f64 },

    #[error("differential is not surjective: smallest singular value {sigma:.3e} < {tol:.3e}")]
    MaximalRankViolation { sigma: f64, tol: f64 },

    #[error("horizontal lift drifted {drift:.3e} off the base curve (limit {tol:.3e})")]
    DriftExceeded { drift: f64, tol: f64 },

    #[error("endpoints fall in different components of the truncated mesh")]
    Unreachable,

    #[error("manifold is not compact: coordinate {index} is unbounded and aperiodic; supply a truncation box")]
    NotCompact { index: usize },

    #[error("need at least {need} sample points, got {got}")]
    InsufficientSamples { need: usize, got: usize },

    #[error("image is not {epsilon}-full on the sampled clouds; rough inverse undefined")]
    FullnessFailed { epsilon: f64 },

    #[error("parameter r must be positive, got {r}")]
    NonPositiveR { r: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("descriptor error: {0}")]
    Descriptor(String),

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
