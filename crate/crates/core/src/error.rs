use thiserror::Error;

/// Errors raised by the operator constructors, classifiers and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight description: {0}")]
    InvalidWeights(String),

    #[error("{0} period must not be empty")]
    EmptyPeriod(&'static str),

    #[error("operator is not invertible: {0}")]
    NotInvertible(String),

    #[error("operation requires a bilateral weight sequence")]
    Unilateral,

    #[error("weight sequence has no periodic tails ({0}); use the horizon-based operations")]
    NotPeriodic(String),

    #[error("operator does not admit a hyperbolic-type splitting: {0}")]
    NotSplittable(String),

    #[error("no unimodular eigenvalue found")]
    NoUnimodularEigenvalue,

    #[error("matrix is not normal (commutator ratio {0:.3e}); use the orbit probes instead")]
    NotNormal(f64),

    #[error("matrix is not hyperbolic: {0}")]
    NotHyperbolic(String),

    #[error("defect profile violated: {0}")]
    ProfileViolated(String),

    #[error("bounded orbit leaves the band (1, 3) at n = {n} (norm {norm})")]
    OrbitOutOfBand { n: i64, norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
