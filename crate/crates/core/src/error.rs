use thiserror::Error;

use crate::state::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix entries contain NaN or infinite values")]
    NonFinite,

    #[error("expected {expected} entries for a square matrix, got {actual}")]
    BadEntryCount { expected: usize, actual: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max |m - m^dagger| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(ValidationReport),

    #[error("Bloch vector length {norm} exceeds 1")]
    BlochOutOfBall { norm: f64 },

    #[error("axis is not a unit vector (norm {norm})")]
    AxisNotNormalized { norm: f64 },

    #[error("basis is not orthonormal (defect {defect:e})")]
    BasisNotOrthonormal { defect: f64 },

    #[error("Kraus elements require a pure auxiliary, got Bloch length {lambda}")]
    MixedAuxiliary { lambda: f64 },

    #[error("Kraus completeness violated (max |sum P^dagger P - I| = {defect:e})")]
    IncompleteKraus { defect: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
