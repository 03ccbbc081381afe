use super::matrix::{ComplexMatrix, C64, ZERO};
use super::DecompConfig;
use crate::error::{LinalgError, Result};

/// Complex Schur form `a = q·t·q*` with `t` upper triangular.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: ComplexMatrix,
    pub t: ComplexMatrix,
}

impl SchurForm {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.t.diag()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.q.matmul(&self.t).mul_adjoint(&self.q)
    }
}

pub fn schur_decompose(a: &ComplexMatrix) -> Result<SchurForm> {
    schur_decompose_with(a, &DecompConfig::default())
}

/// Householder reduction to Hessenberg form followed by single-shift
/// implicit QR sweeps (Wilkinson shift on the trailing 2×2).
pub fn schur_decompose_with(a: &ComplexMatrix, cfg: &DecompConfig) -> Result<SchurForm> {
    if !a.is_square() {
        return Err(LinalgError::Dimension(
            "schur_decompose requires a square matrix".into(),
        ));
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite { row: 0, col: 0 });
    }
    let n = a.rows();
    let (mut h, mut q) = hessenberg(a);
    if n <= 1 {
        return Ok(SchurForm { q, t: h });
    }
    let norm_floor = h.frobenius_norm() * f64::EPSILON;
    let max_iter = cfg.schur_max_iterations_per_eigenvalue * n;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;

    while hi > 0 {
        // locate the start of the active unreduced block
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag_scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if sub <= cfg.schur_deflation_tol * diag_scale || sub <= norm_floor {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(LinalgError::NoConvergence { iterations: total });
        }

        let shift = if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm() * 0.75, h[(hi, hi - 1)].norm() * 0.4)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        let mut x = h[(l, l)] - shift;
        let mut y = h[(l + 1, l)];
        for k in l..hi {
            if k > l {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let col_start = if k > l { k - 1 } else { l };
            // rows k, k+1 ← G·rows
            for j in col_start..n {
                let a0 = h[(k, j)];
                let a1 = h[(k + 1, j)];
                h[(k, j)] = a0 * c + s * a1;
                h[(k + 1, j)] = -s.conj() * a0 + a1 * c;
            }
            if k > l {
                h[(k + 1, k - 1)] = ZERO;
            }
            // cols k, k+1 ← cols·G*
            let row_end = (k + 2).min(hi);
            for i in 0..=row_end {
                let a0 = h[(i, k)];
                let a1 = h[(i, k + 1)];
                h[(i, k)] = a0 * c + a1 * s.conj();
                h[(i, k + 1)] = -a0 * s + a1 * c;
            }
            for i in 0..n {
                let a0 = q[(i, k)];
                let a1 = q[(i, k + 1)];
                q[(i, k)] = a0 * c + a1 * s.conj();
                q[(i, k + 1)] = -a0 * s + a1 * c;
            }
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(SchurForm { q, t: h })
}

/// Givens pair `(c, s)` with `[[c, s], [-conj(s), c]]·[x; y] = [r; 0]`.
#[inline]
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let rho = ax.hypot(ay);
    (ax / rho, (x / ax) * y.conj() / rho)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Unitary Hessenberg reduction `a = q·h·q*`.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let alpha_norm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * alpha_norm;
        for i in 0..n {
            v[i] = if i <= k { ZERO } else { h[(i, k)] };
        }
        v[k + 1] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // h ← (I - 2vv*)·h
        for j in 0..n {
            let mut dot = ZERO;
            for i in k + 1..n {
                dot += v[i].conj() * h[(i, j)];
            }
            for i in k + 1..n {
                h[(i, j)] -= v[i] * dot * 2.0;
            }
        }
        // h ← h·(I - 2vv*), q ← q·(I - 2vv*)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let mut dot = ZERO;
                for j in k + 1..n {
                    dot += m[(i, j)] * v[j];
                }
                for j in k + 1..n {
                    m[(i, j)] -= dot * v[j].conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_by_imag(mut v: Vec<C64>) -> Vec<C64> {
        v.sort_by(|a, b| a.im.total_cmp(&b.im));
        v
    }

    #[test]
    fn triangular_input_is_fixed_point() {
        let t = ComplexMatrix::from_rows(&[
            vec![C64::new(1.0, 0.0), C64::new(2.0, 1.0), C64::new(3.0, 0.0)],
            vec![ZERO, C64::new(-1.0, 0.5), C64::new(0.0, 1.0)],
            vec![ZERO, ZERO, C64::new(4.0, 0.0)],
        ]);
        let s = schur_decompose(&t).unwrap();
        assert!(s.q.rel_dist(&ComplexMatrix::identity(3)) < 1e-15);
        assert!(s.t.rel_dist(&t) < 1e-15);
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let s = schur_decompose(&a).unwrap();
        let ev = sorted_by_imag(s.eigenvalues());
        assert!((ev[0] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - C64::new(0.0, 1.0)).norm() < 1e-14);
        assert!(s.reconstruct().rel_dist(&a) < 1e-14);
        assert!(s.q.unitarity_residual() < 1e-14);
    }

    #[test]
    fn hermitian_input_gives_diagonal_t() {
        let h = ComplexMatrix::from_rows(&[
            vec![C64::new(2.0, 0.0), C64::new(1.0, -1.0), C64::new(0.0, 0.5)],
            vec![C64::new(1.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.3, 0.2)],
            vec![C64::new(0.0, -0.5), C64::new(0.3, -0.2), C64::new(0.5, 0.0)],
        ]);
        let s = schur_decompose(&h).unwrap();
        let mut upper: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                upper = upper.max(s.t[(i, j)].norm());
            }
        }
        assert!(upper < 1e-12, "off-diagonal {upper:e}");
        assert!(s.reconstruct().rel_dist(&h) < 1e-14);
    }

    #[test]
    fn nilpotent_jordan_block() {
        let a = ComplexMatrix::from_real(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let s = schur_decompose(&a).unwrap();
        assert!(s.reconstruct().rel_dist(&a) < 1e-14);
        assert!(s.eigenvalues().iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn companion_matrix_roots() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let a = ComplexMatrix::from_real(3, 3, &[6.0, -11.0, 6.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let s = schur_decompose(&a).unwrap();
        let mut ev: Vec<f64> = s.eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        for (got, want) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(s.t.lower_max_abs() == 0.0);
    }
}
