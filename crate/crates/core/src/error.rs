use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numerical routines.
///
/// Variants carrying a residual or eigenvalue report the measured quantity
/// that tripped the check, so callers can surface it in diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NonHermitianInput { residual: f64 },

    #[error("Choi matrix is not Hermitian (residual {residual:.3e}); the map does not preserve Hermiticity")]
    NonHermitianChoi { residual: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.6e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("map is not trace preserving (residual {residual:.3e})")]
    NotTracePreserving { residual: f64 },

    #[error("map is not completely positive (minimum Choi eigenvalue {min_eigenvalue:.6e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("J is singular (minimum eigenvalue {min_eigenvalue:.3e})")]
    SingularJ { min_eigenvalue: f64 },

    #[error("Kraus set is not complete (residual {residual:.3e})")]
    NotCompleteKraus { residual: f64 },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
}
