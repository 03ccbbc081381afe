//! Numerical certification that the unitary polar factor minimizes the
//! logarithmic distance `‖Log(Q*Z)‖` to the unitary group, for every
//! unitarily invariant norm.
//!
//! The crate is layered bottom-up:
//!
//! * [`densekit`]: complex matrices, Schur/SVD/eigen/polar decompositions, Haar sampling.
//! * [`matfun`]: matrix exponential, principal logarithm, logarithm branches, Hermitian parts.
//! * [`norms`]: unitarily invariant norms as gauge functions of singular values.
//! * [`majorize`]: majorization, compound matrices, partial compound traces, Cohen's trace
//!   inequality and the elementary-symmetric-polynomial chain.
//! * [`optimize`]: objectives over U(n), random search, local descent, the Ky Fan minimizer
//!   family, uniqueness probe and the rectangular counterexample.

pub mod densekit;
pub mod error;
pub mod majorize;
pub mod matfun;
pub mod norms;
pub mod optimize;

pub use densekit::{ComplexMatrix, C64};
pub use error::{LinalgError, Result};
