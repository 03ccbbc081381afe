use super::matrix::{ComplexMatrix, C64};
use super::DecompConfig;
use crate::error::{LinalgError, Result};

/// Jacobi rotation `G = D·J` that diagonalizes the Hermitian 2×2 block
/// `[[a, b], [conj(b), d]]` via `G*·A·G`, where `D = diag(1, e^{-iφ})`, `b = |b|e^{iφ}`.
/// Returns `(c, s, phase)` with `G = [[c, s], [-s·phase, c·phase]]`.
#[inline]
pub(crate) fn jacobi_rotation(a: f64, d: f64, b: C64) -> (f64, f64, C64) {
    let abs_b = b.norm();
    let phase = C64::new(b.re / abs_b, -b.im / abs_b);
    let tau = (d - a) / (2.0 * abs_b);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
///
/// Eigenvalues are returned in descending order (stable with respect to the
/// diagonal order reached at convergence); `vectors` holds the matching
/// orthonormal eigenvectors as columns.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>)> {
    hermitian_eig_with(h, &DecompConfig::default())
}

pub fn hermitian_eig_with(
    h: &ComplexMatrix,
    cfg: &DecompConfig,
) -> Result<(ComplexMatrix, Vec<f64>)> {
    if !h.is_square() {
        return Err(LinalgError::Dimension(
            "hermitian_eig requires a square matrix".into(),
        ));
    }
    let dev = h.hermitian_deviation();
    if dev > cfg.hermitian_tol * (1.0 + h.max_abs()) {
        return Err(LinalgError::NotHermitian { deviation: dev });
    }
    let n = h.rows();
    // symmetrize exactly so the sweep only sees Hermitian data
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(h[(i, i)].re, 0.0)
        } else {
            (h[(i, j)] + h[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = n <= 1 || scale == 0.0;
    for _ in 0..cfg.jacobi_max_sweeps {
        if converged {
            break;
        }
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= f64::EPSILON * 0.5 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if b.norm() <= f64::EPSILON * 1e-2 * (app.abs() + aqq.abs()).max(f64::MIN_POSITIVE)
                {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let (c, s, ph) = jacobi_rotation(app, aqq, b);
                rotate_columns(&mut a, p, q, c, s, ph);
                rotate_rows_adjoint(&mut a, p, q, c, s, ph);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                rotate_columns(&mut v, p, q, c, s, ph);
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            iterations: cfg.jacobi_max_sweeps,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    Ok((v.permute_columns(&order), values))
}

/// `M ← M·G` on columns `p, q`.
#[inline]
pub(crate) fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, ph: C64) {
    for k in 0..m.rows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)] * ph;
        m[(k, p)] = mp * c - mq * s;
        m[(k, q)] = mp * s + mq * c;
    }
}

/// `M ← G*·M` on rows `p, q`.
#[inline]
fn rotate_rows_adjoint(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, ph: C64) {
    let phc = ph.conj();
    for k in 0..m.cols() {
        let mp = m[(p, k)];
        let mq = m[(q, k)] * phc;
        m[(p, k)] = mp * c - mq * s;
        m[(q, k)] = mp * s + mq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_case() {
        let (v, w) = hermitian_eig(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(w, vec![1.0, 1.0, 1.0]);
        assert!(v.rel_dist(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn diagonal_reorders_descending() {
        let h = ComplexMatrix::from_real_diag(&[1.0, 4.0, 2.0]);
        let (v, w) = hermitian_eig(&h).unwrap();
        assert_eq!(w, vec![4.0, 2.0, 1.0]);
        // permutation matrix: columns e2, e3, e1
        let p = ComplexMatrix::from_real(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert!(v.rel_dist(&p) < 1e-15);
    }

    #[test]
    fn swap_matrix_eigenvalues() {
        // characteristic polynomial λ² - 1
        let h = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let (v, w) = hermitian_eig(&h).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] + 1.0).abs() < 1e-15);
        let rec = v.matmul(&ComplexMatrix::from_real_diag(&w)).mul_adjoint(&v);
        assert!(rec.rel_dist(&h) < 1e-15);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let h = ComplexMatrix::from_rows(&[
            vec![C64::new(2.0, 0.0), C64::new(1.0, -1.0), C64::new(0.0, 0.5)],
            vec![C64::new(1.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.3, 0.2)],
            vec![C64::new(0.0, -0.5), C64::new(0.3, -0.2), C64::new(0.5, 0.0)],
        ]);
        let (v, w) = hermitian_eig(&h).unwrap();
        assert!(w.windows(2).all(|p| p[0] >= p[1]));
        assert!(v.unitarity_residual() < 1e-14);
        let rec = v.matmul(&ComplexMatrix::from_real_diag(&w)).mul_adjoint(&v);
        assert!(rec.rel_dist(&h) < 1e-14);
        // trace is preserved
        assert!((w.iter().sum::<f64>() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(
            hermitian_eig(&a),
            Err(LinalgError::NotHermitian { .. })
        ));
    }
}
