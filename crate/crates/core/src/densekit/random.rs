use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix, C64};
use super::qr::qr;

/// Deterministic generator for one (seed, stream) pair. Streams let independent
/// trials draw from disjoint sequences regardless of evaluation order.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Matrix with i.i.d. standard complex Gaussian entries (unit variance).
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary: QR of a complex Gaussian with the phases of
/// diag(R) moved into Q.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1, "haar_unitary: n must be positive");
    let g = complex_gaussian(n, n, rng);
    let (mut q, r) = qr(&g).expect("square QR cannot fail");
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    haar_unitary(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `U·diag(σ)·V*` with each `log σ_i` uniform on `[-log_cond/2, log_cond/2]`, so the
/// condition number is at most `exp(log_cond)`.
pub fn nonsingular_with<R: Rng + ?Sized>(n: usize, log_cond: f64, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1 && log_cond >= 0.0);
    let u = haar_unitary(n, rng);
    let v = haar_unitary(n, rng);
    let half = log_cond / 2.0;
    let logs: Vec<f64> = (0..n).map(|_| rng.random_range(-half..=half)).collect();
    let sigma: Vec<f64> = logs.iter().map(|l| l.exp()).collect();
    let mut us = u;
    for j in 0..n {
        for i in 0..n {
            us[(i, j)] *= sigma[j];
        }
    }
    us.mul_adjoint(&v)
}

pub fn random_nonsingular(n: usize, log_cond: f64, seed: u64) -> ComplexMatrix {
    nonsingular_with(n, log_cond, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Hermitian matrix `U·diag(λ)·U*` with the given spectrum.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(spectrum: &[f64], rng: &mut R) -> ComplexMatrix {
    let u = haar_unitary(spectrum.len(), rng);
    let d = ComplexMatrix::from_real_diag(spectrum);
    u.matmul(&d).mul_adjoint(&u)
}
