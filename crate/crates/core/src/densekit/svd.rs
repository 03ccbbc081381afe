use super::eig::{jacobi_rotation, rotate_columns};
use super::matrix::{ComplexMatrix, C64, ZERO};
use super::DecompConfig;
use crate::error::{LinalgError, Result};

/// Thin SVD `z = u·diag(sigma)·v*` with `sigma` descending.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.u.clone();
        for j in 0..us.cols() {
            for i in 0..us.rows() {
                us[(i, j)] *= self.sigma[j];
            }
        }
        us.mul_adjoint(&self.v)
    }
}

/// Polar factors `z = unitary·hermitian`.
#[derive(Debug, Clone)]
pub struct PolarFactors {
    pub unitary: ComplexMatrix,
    pub hermitian: ComplexMatrix,
}

/// One-sided (Hestenes) Jacobi SVD of an m×n matrix with m ≥ n.
pub fn svd(z: &ComplexMatrix) -> Result<SvdFactors> {
    svd_with(z, &DecompConfig::default())
}

pub fn svd_with(z: &ComplexMatrix, cfg: &DecompConfig) -> Result<SvdFactors> {
    let (m, n) = (z.rows(), z.cols());
    if m < n {
        return Err(LinalgError::Dimension(format!(
            "svd requires rows >= cols, got {m}x{n}"
        )));
    }
    if !z.is_finite() {
        return Err(LinalgError::NonFinite { row: 0, col: 0 });
    }
    let mut a = z.clone();
    let mut v = ComplexMatrix::identity(n);
    let (sigma, order) = one_sided_jacobi(&mut a, Some(&mut v), cfg)?;

    let smax = sigma.first().copied().unwrap_or(0.0);
    let mut u = ComplexMatrix::zeros(m, n);
    let mut filled = vec![false; n];
    for (j, &src) in order.iter().enumerate() {
        let s = sigma[j];
        if s > smax * f64::EPSILON * 4.0 && s > 0.0 {
            for i in 0..m {
                u[(i, j)] = a[(i, src)] / s;
            }
            filled[j] = true;
        }
    }
    complete_orthonormal(&mut u, &filled);
    Ok(SvdFactors {
        u,
        sigma,
        v: v.permute_columns(&order),
    })
}

/// Singular values only, descending. Accepts any shape.
pub fn singular_values(z: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut a = if z.rows() >= z.cols() {
        z.clone()
    } else {
        z.adjoint()
    };
    Ok(one_sided_jacobi(&mut a, None, &DecompConfig::default())?.0)
}

/// Orthogonalizes the columns of `a` in place; returns the sorted column norms and the
/// sorting permutation (column `order[j]` of `a` carries `sigma[j]`).
fn one_sided_jacobi(
    a: &mut ComplexMatrix,
    mut v: Option<&mut ComplexMatrix>,
    cfg: &DecompConfig,
) -> Result<(Vec<f64>, Vec<usize>)> {
    let (m, n) = (a.rows(), a.cols());
    let mut norms: Vec<f64> = (0..n).map(|j| col_norm_sqr(a, j)).collect();
    let mut converged = n <= 1;
    let mut sweeps = 0;
    while !converged && sweeps < cfg.jacobi_max_sweeps {
        sweeps += 1;
        converged = true;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let mut gamma = ZERO;
                for i in 0..m {
                    gamma += a[(i, p)].conj() * a[(i, q)];
                }
                if gamma.norm() <= cfg.jacobi_orth_tol * (alpha * beta).sqrt() {
                    continue;
                }
                converged = false;
                let (c, s, ph) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(a, p, q, c, s, ph);
                if let Some(v) = v.as_deref_mut() {
                    rotate_columns(v, p, q, c, s, ph);
                }
                norms[p] = col_norm_sqr(a, p);
                norms[q] = col_norm_sqr(a, q);
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { iterations: sweeps });
    }
    let sig: Vec<f64> = norms.iter().map(|x| x.sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sig[j].total_cmp(&sig[i]));
    Ok((order.iter().map(|&j| sig[j]).collect(), order))
}

#[inline]
fn col_norm_sqr(a: &ComplexMatrix, j: usize) -> f64 {
    (0..a.rows()).map(|i| a[(i, j)].norm_sqr()).sum()
}

/// Fills the columns not marked in `filled` with an orthonormal completion
/// (Gram–Schmidt against the standard basis).
fn complete_orthonormal(u: &mut ComplexMatrix, filled: &[bool]) {
    let m = u.rows();
    let mut basis = 0;
    for j in 0..u.cols() {
        if filled[j] {
            continue;
        }
        while basis < m {
            let mut w = vec![ZERO; m];
            w[basis] = C64::new(1.0, 0.0);
            basis += 1;
            for _ in 0..2 {
                for k in 0..u.cols() {
                    if !(filled[k] || k < j) {
                        continue;
                    }
                    let mut dot = ZERO;
                    for i in 0..m {
                        dot += u[(i, k)].conj() * w[i];
                    }
                    for i in 0..m {
                        w[i] -= u[(i, k)] * dot;
                    }
                }
            }
            let nrm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 1e-8 {
                for i in 0..m {
                    u[(i, j)] = w[i] / nrm;
                }
                break;
            }
        }
    }
}

/// Polar decomposition of a full-column-rank m×n matrix (m ≥ n):
/// `unitary = u·v*`, `hermitian = v·diag(sigma)·v*`.
pub fn polar(z: &ComplexMatrix) -> Result<PolarFactors> {
    polar_with(z, &DecompConfig::default())
}

pub fn polar_with(z: &ComplexMatrix, cfg: &DecompConfig) -> Result<PolarFactors> {
    let f = svd_with(z, cfg)?;
    polar_from_svd(&f, cfg)
}

pub fn polar_from_svd(f: &SvdFactors, cfg: &DecompConfig) -> Result<PolarFactors> {
    let smax = f.sigma.first().copied().unwrap_or(0.0);
    let smin = f.sigma.last().copied().unwrap_or(0.0);
    let threshold = cfg.rank_rel_tol * smax;
    if smin <= threshold || smax == 0.0 {
        return Err(LinalgError::RankDeficient {
            sigma_min: smin,
            threshold,
        });
    }
    let unitary = f.u.mul_adjoint(&f.v);
    let mut vs = f.v.clone();
    for j in 0..vs.cols() {
        for i in 0..vs.rows() {
            vs[(i, j)] *= f.sigma[j];
        }
    }
    let mut hermitian = vs.mul_adjoint(&f.v);
    // remove rounding-level anti-Hermitian residue
    let n = hermitian.rows();
    for i in 0..n {
        hermitian[(i, i)].im = 0.0;
        for j in i + 1..n {
            let avg = (hermitian[(i, j)] + hermitian[(j, i)].conj()) * 0.5;
            hermitian[(i, j)] = avg;
            hermitian[(j, i)] = avg.conj();
        }
    }
    Ok(PolarFactors { unitary, hermitian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn sign_absorbed_into_u() {
        let f = svd(&ComplexMatrix::from_real_diag(&[3.0, -2.0])).unwrap();
        assert_eq!(f.sigma, vec![3.0, 2.0]);
        assert!(
            f.reconstruct()
                .rel_dist(&ComplexMatrix::from_real_diag(&[3.0, -2.0]))
                < 1e-15
        );
    }

    #[test]
    fn column_of_ones() {
        let z = ComplexMatrix::from_real(2, 1, &[1.0, 1.0]);
        let f = svd(&z).unwrap();
        assert!((f.sigma[0] - SQRT_2).abs() < 1e-15);
        let p = polar(&z).unwrap();
        let expected = ComplexMatrix::from_real(2, 1, &[1.0 / SQRT_2, 1.0 / SQRT_2]);
        assert!(p.unitary.rel_dist(&expected) < 1e-15);
        assert!((p.hermitian[(0, 0)].re - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_completion_is_orthonormal() {
        let z = ComplexMatrix::from_real(3, 3, &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let f = svd(&z).unwrap();
        assert!((f.sigma[0] - 2.0).abs() < 1e-14);
        assert!(f.sigma[1].abs() < 1e-14 && f.sigma[2].abs() < 1e-14);
        assert!(f.u.unitarity_residual() < 1e-14);
        assert!(f.reconstruct().rel_dist(&z) < 1e-14);
        match polar(&z) {
            Err(LinalgError::RankDeficient { sigma_min, .. }) => assert!(sigma_min < 1e-14),
            other => panic!("expected rank error, got {other:?}"),
        }
    }

    #[test]
    fn nilpotent_singular_values() {
        let s = singular_values(&ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(s, vec![1.0, 0.0]);
    }

    #[test]
    fn wide_input_rejected_by_svd_but_not_singular_values() {
        let z = ComplexMatrix::from_real(1, 2, &[3.0, 4.0]);
        assert!(matches!(svd(&z), Err(LinalgError::Dimension(_))));
        assert!((singular_values(&z).unwrap()[0] - 5.0).abs() < 1e-15);
    }
}
