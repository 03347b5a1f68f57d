use thiserror::Error;

/// Errors raised by the numerical kernels and constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m†| entry {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("negative eigenvalue {0:.3e} below the support cutoff")]
    NegativeEigenvalue(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("not a probability distribution: {0}")]
    NotProbability(String),

    #[error("operators do not resolve the identity (residual {0:.3e})")]
    NotResolutionOfIdentity(f64),

    #[error("invalid projective measurement: {0}")]
    InvalidMeasurement(String),

    #[error("unsupported dimensions {0:?}: only two-qubit states are supported here")]
    UnsupportedDimension(Vec<usize>),

    #[error("basis is singular (pivot {0:.3e})")]
    SingularBasis(f64),

    #[error("dual operators do not sum to the identity (residual {0:.3e})")]
    DualsDoNotResolveIdentity(f64),

    #[error("projector {index} has rank {rank:.3}, expected 1")]
    NotRankOne { index: usize, rank: f64 },

    #[error("no restart produced a witness with marginal residual below {threshold:e} (best {best:.3e})")]
    NoFeasibleWitness { threshold: f64, best: f64 },

    #[error("invalid assignment map: {0}")]
    InvalidAssignment(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
