use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the decompositions, matrix functions and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary: ||Q*Q - I||_F = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not skew-Hermitian: ||S + S*||_F = {deviation:e}")]
    NotSkewHermitian { deviation: f64 },

    #[error("rank deficient: smallest singular value {sigma_min:e} below threshold {threshold:e}")]
    RankDeficient { sigma_min: f64, threshold: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("QR iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("eigenvalue {eigenvalue} lies on the branch cut (-inf, 0] of the principal logarithm")]
    BranchCut { eigenvalue: Complex64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, LinalgError>;
