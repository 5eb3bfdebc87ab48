//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input matrix is not symmetric within the construction tolerance.
    #[error("operator is not symmetric: max asymmetry {max_asymmetry:.3e} exceeds {tolerance:.3e}")]
    NonSymmetric { max_asymmetry: f64, tolerance: f64 },

    /// Vector/matrix dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Covariance spectrum dips below the allowed negative band.
    #[error(
        "operator is not positive semidefinite: min eigenvalue {min_eigenvalue:.6e} below {threshold:.3e}"
    )]
    NotPositiveSemidefinite { min_eigenvalue: f64, threshold: f64 },

    /// A^2 != A beyond tolerance; the quadratic form has no squared-norm reformulation.
    #[error("operator is not idempotent: ||A^2 - A||_F = {residual:.6e}")]
    NotIdempotent { residual: f64 },

    /// Cumulant order above the supported cap.
    #[error("cumulant order {order} exceeds maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    /// MGF evaluated at or beyond its singularity.
    #[error("t = {t} is outside the MGF domain (bound {bound})")]
    OutOfDomain { t: f64, bound: f64 },

    /// Statistical routine called with too little data.
    #[error("too few samples: got {got}, need at least {min}")]
    TooFewSamples { got: usize, min: usize },

    /// Jacobi sweeps exhausted without reaching the off-diagonal target.
    #[error("eigendecomposition failed to converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    /// Subspace basis is not orthonormal or does not fit the ambient dimension.
    #[error("invalid subspace: {reason}")]
    InvalidSubspace { reason: String },

    /// Parameter combination outside the documented contract.
    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
