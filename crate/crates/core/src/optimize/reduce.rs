//! Reduction of the problem to a positive diagonal `Z`, and the rectangular
//! example where the polar factor stops being the log-minimizer.

use crate::densekit::{polar, rng_for, svd, ComplexMatrix, DecompConfig, C64};
use crate::error::{LinalgError, Result};
use crate::matfun::logm_principal;

/// `z = u_p·v·diag(d)·v*` with `d` positive and descending.
#[derive(Debug, Clone)]
pub struct DiagonalReduction {
    pub d: Vec<f64>,
    pub u_p: ComplexMatrix,
    pub v: ComplexMatrix,
}

impl DiagonalReduction {
    pub fn diag(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&self.d)
    }

    /// The unitary `q̃ = v*·u_p*·q·v`, for which `q̃*·diag(d)` is unitarily
    /// similar to `q*·z`, so every objective takes the same value on both.
    pub fn transform_q(&self, q: &ComplexMatrix) -> ComplexMatrix {
        self.v.adjoint_mul(&self.u_p.adjoint_mul(q)).matmul(&self.v)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.u_p
            .matmul(&self.v)
            .matmul(&self.diag())
            .mul_adjoint(&self.v)
    }
}

pub fn reduce_to_diagonal(z: &ComplexMatrix) -> Result<DiagonalReduction> {
    if !z.is_square() {
        return Err(LinalgError::Dimension(
            "reduction requires a square matrix".into(),
        ));
    }
    let f = svd(z)?;
    let cfg = DecompConfig::default();
    let smax = f.sigma.first().copied().unwrap_or(0.0);
    let smin = f.sigma.last().copied().unwrap_or(0.0);
    if smin <= cfg.rank_rel_tol * smax {
        return Err(LinalgError::RankDeficient {
            sigma_min: smin,
            threshold: cfg.rank_rel_tol * smax,
        });
    }
    let u_p = f.u.mul_adjoint(&f.v);
    Ok(DiagonalReduction {
        d: f.sigma,
        u_p,
        v: f.v,
    })
}

#[derive(Debug, Clone)]
pub struct RectangularReport {
    pub z: ComplexMatrix,
    pub u_p: ComplexMatrix,
    pub v: ComplexMatrix,
    /// `|log(U_p*Z)| = ln √2`
    pub log_at_up: f64,
    /// `|log(V*Z)| = 0`
    pub log_at_v: f64,
    /// `‖Z − U_p‖_F = √2 − 1`
    pub dist_at_up: f64,
    /// `‖Z − V‖_F = 1`
    pub dist_at_v: f64,
    /// `‖H − 1‖_F`
    pub h_minus_one: f64,
    /// Smallest `‖Z − W‖_F` over sampled isometries `W`.
    pub sampled_min_dist: f64,
    pub samples: usize,
    /// `V` beats `U_p` for the log objective.
    pub log_counterexample: bool,
    /// `U_p` is still nearest in Frobenius distance among all samples and `V`.
    pub nearest_holds: bool,
}

const RECT_SAMPLES: usize = 2000;

/// `Z = [1; 1]`: the log objective is smaller at `V = [1; 0]` than at the
/// polar factor, while the nearest-isometry property of the polar factor persists.
pub fn rectangular_counterexample_check() -> Result<RectangularReport> {
    let z = ComplexMatrix::from_real(2, 1, &[1.0, 1.0]);
    let p = polar(&z)?;
    let v = ComplexMatrix::from_real(2, 1, &[1.0, 0.0]);
    let log_abs = |w: &ComplexMatrix| -> Result<f64> {
        Ok(logm_principal(&w.adjoint_mul(&z))?[(0, 0)].norm())
    };
    let log_at_up = log_abs(&p.unitary)?;
    let log_at_v = log_abs(&v)?;
    let dist_at_up = (&z - &p.unitary).frobenius_norm();
    let dist_at_v = (&z - &v).frobenius_norm();
    let h_minus_one = (p.hermitian[(0, 0)] - C64::new(1.0, 0.0)).norm();

    let mut rng = rng_for(0x5EED_1091, 34);
    let mut sampled_min_dist = f64::INFINITY;
    for _ in 0..RECT_SAMPLES {
        let w = crate::densekit::complex_gaussian(2, 1, &mut rng);
        let w = w.scale_real(1.0 / w.frobenius_norm());
        sampled_min_dist = sampled_min_dist.min((&z - &w).frobenius_norm());
    }
    let tol = 1e-12;
    Ok(RectangularReport {
        log_counterexample: log_at_v < log_at_up,
        nearest_holds: dist_at_up <= sampled_min_dist + tol && dist_at_up <= dist_at_v + tol,
        z,
        u_p: p.unitary,
        v,
        log_at_up,
        log_at_v,
        dist_at_up,
        dist_at_v,
        h_minus_one,
        sampled_min_dist,
        samples: RECT_SAMPLES,
    })
}
