//! Dense complex matrices and the decompositions the rest of the crate builds on:
//! LU, Householder QR, Hermitian Jacobi eigensolver, complex Schur form,
//! one-sided Jacobi SVD, polar decomposition and seeded random generators.

mod eig;
mod lu;
mod matrix;
mod qr;
mod random;
mod schur;
mod svd;

pub use eig::{hermitian_eig, hermitian_eig_with};
pub use lu::{det, inverse, solve_upper_triangular, Lu};
pub use matrix::{ComplexMatrix, C64};
pub(crate) use matrix::{ONE, ZERO};
pub use qr::qr;
pub use random::{
    complex_gaussian, haar_unitary, hermitian_with_spectrum, nonsingular_with, random_nonsingular,
    random_unitary, rng_for,
};
pub use schur::{schur_decompose, schur_decompose_with, SchurForm};
pub use svd::{
    polar, polar_from_svd, polar_with, singular_values, svd, svd_with, PolarFactors, SvdFactors,
};

/// Tolerances and iteration limits shared by the decompositions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompConfig {
    /// Relative reconstruction residual the decompositions are expected to meet.
    pub residual_tol: f64,
    /// Polar/rank threshold relative to the largest singular value.
    pub rank_rel_tol: f64,
    /// Accepted Hermitian deviation, relative to `1 + max|a_ij|`.
    pub hermitian_tol: f64,
    /// Subdiagonal deflation: `|h_{i+1,i}| <= tol·(|h_ii| + |h_{i+1,i+1}|)`.
    pub schur_deflation_tol: f64,
    pub schur_max_iterations_per_eigenvalue: usize,
    pub jacobi_max_sweeps: usize,
    /// Column-pair orthogonality threshold for one-sided Jacobi.
    pub jacobi_orth_tol: f64,
}

impl Default for DecompConfig {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            rank_rel_tol: 1e-12,
            hermitian_tol: 1e-10,
            schur_deflation_tol: 1e-14,
            schur_max_iterations_per_eigenvalue: 60,
            jacobi_max_sweeps: 60,
            jacobi_orth_tol: 1e-15,
        }
    }
}
