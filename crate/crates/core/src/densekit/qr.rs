use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{LinalgError, Result};

/// Thin Householder QR of an m×n matrix (m ≥ n): `a = q·r`, `q` m×n with
/// orthonormal columns, `r` n×n upper triangular.
pub fn qr(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(LinalgError::Dimension(format!(
            "qr requires rows >= cols, got {m}x{n}"
        )));
    }
    let mut r = a.clone();
    let mut reflectors: Vec<Vec<C64>> = Vec::with_capacity(n);
    for k in 0..n {
        let norm = (k..m).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let mut v = vec![ZERO; m];
        if norm > 0.0 {
            let x0 = r[(k, k)];
            let phase = if x0.norm() == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                x0 / x0.norm()
            };
            for i in k..m {
                v[i] = r[(i, k)];
            }
            v[k] += phase * norm;
            let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in v.iter_mut() {
                *z /= vn;
            }
            for j in k..n {
                let mut dot = ZERO;
                for i in k..m {
                    dot += v[i].conj() * r[(i, j)];
                }
                for i in k..m {
                    r[(i, j)] -= v[i] * dot * 2.0;
                }
            }
            for i in k + 1..m {
                r[(i, k)] = ZERO;
            }
        }
        reflectors.push(v);
    }
    let mut q = ComplexMatrix::from_fn(m, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { ZERO });
    for (k, v) in reflectors.iter().enumerate().rev() {
        if v.iter().all(|z| *z == ZERO) {
            continue;
        }
        for j in 0..n {
            let mut dot = ZERO;
            for i in k..m {
                dot += v[i].conj() * q[(i, j)];
            }
            for i in k..m {
                q[(i, j)] -= v[i] * dot * 2.0;
            }
        }
    }
    Ok((q, r.block(0, 0, n, n)))
}
