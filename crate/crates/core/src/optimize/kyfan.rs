//! Ky Fan minimizer families and the numerical uniqueness probe.

use rand::Rng;

use crate::densekit::{rng_for, svd, ComplexMatrix, SvdFactors};
use crate::error::{LinalgError, Result};
use crate::matfun::{expm, logm_principal};
use crate::norms::{singular_values, NormSpec};

use super::descent::{local_descent, skew_basis, skew_from_coords};
use super::objective::{Mode, Objective, UNITARY_TOL};

/// Minimum gap between distinct `|log σ_i|` accepted by [`uniqueness_probe`].
pub const MIN_LOG_SEPARATION: f64 = 0.05;

/// SVD with the singular values ordered so `|log σ̂_i|` is descending (stable on ties).
pub fn permuted_svd_by_log_modulus(z: &ComplexMatrix) -> Result<SvdFactors> {
    if !z.is_square() {
        return Err(LinalgError::Dimension(
            "permuted SVD requires a square matrix".into(),
        ));
    }
    let f = svd(z)?;
    let smax = f.sigma.first().copied().unwrap_or(0.0);
    if let Some(&smin) = f.sigma.last() {
        if smin <= 1e-12 * smax || smin == 0.0 {
            return Err(LinalgError::RankDeficient {
                sigma_min: smin,
                threshold: 1e-12 * smax,
            });
        }
    }
    let mut order: Vec<usize> = (0..f.sigma.len()).collect();
    order.sort_by(|&a, &b| f.sigma[b].ln().abs().total_cmp(&f.sigma[a].ln().abs()));
    Ok(SvdFactors {
        u: f.u.permute_columns(&order),
        sigma: order.iter().map(|&i| f.sigma[i]).collect(),
        v: f.v.permute_columns(&order),
    })
}

/// One member `Q̂ = Û diag(I_k, Q₂₂) V̂*` of the Ky Fan `k` minimizer family.
#[derive(Debug, Clone)]
pub struct KyFanMember {
    pub q_hat: ComplexMatrix,
    pub k: usize,
    /// `‖log(Q₂₂*·diag(σ̂_{k+1..n}))‖₂ ≤ |log σ̂_k|`
    pub admissible: bool,
    /// Left side of the admissibility condition.
    pub condition_lhs: f64,
    /// Right side, `|log σ̂_k|`.
    pub condition_rhs: f64,
    /// Ky Fan `k` norm of `log(Q̂*Z)`.
    pub value_k: f64,
    /// `Σ_{i≤k} |log σ̂_i|`, the minimum over all unitaries.
    pub target: f64,
}

/// Builds the family member for `q22` (of size `n−k`; empty when `k = n`).
///
/// `Q̂*Z = V̂ diag(Σ̂₁, Q₂₂*Σ̂₂) V̂*`, so admissibility is tested on the block
/// `Q₂₂*·diag(σ̂_{k+1..n})` that actually appears in the logarithm.
pub fn kyfan_minimizer_family(
    z: &ComplexMatrix,
    k: usize,
    q22: &ComplexMatrix,
) -> Result<KyFanMember> {
    let f = permuted_svd_by_log_modulus(z)?;
    let n = f.sigma.len();
    if k == 0 || k > n {
        return Err(LinalgError::Parameter(format!(
            "Ky Fan index {k} outside 1..={n}"
        )));
    }
    let m = n - k;
    if q22.rows() != m || q22.cols() != m {
        return Err(LinalgError::Dimension(format!(
            "q22 must be {m}x{m}, got {}x{}",
            q22.rows(),
            q22.cols()
        )));
    }
    if m > 0 {
        let dev = q22.unitarity_residual();
        if dev > UNITARY_TOL {
            return Err(LinalgError::NotUnitary { deviation: dev });
        }
    }
    let log_abs: Vec<f64> = f.sigma.iter().map(|s| s.ln().abs()).collect();
    let condition_rhs = log_abs[k - 1];
    let condition_lhs = if m == 0 {
        0.0
    } else {
        let block = q22.adjoint_mul(&ComplexMatrix::from_real_diag(&f.sigma[k..]));
        singular_values(&logm_principal(&block)?)[0]
    };
    let mut mid = ComplexMatrix::identity(n);
    if m > 0 {
        mid.set_block(k, k, q22);
    }
    let q_hat = f.u.matmul(&mid).mul_adjoint(&f.v);
    let value_k =
        NormSpec::KyFan(k).gauge_sorted(&singular_values(&logm_principal(&q_hat.adjoint_mul(z))?));
    Ok(KyFanMember {
        q_hat,
        k,
        admissible: condition_lhs <= condition_rhs,
        condition_lhs,
        condition_rhs,
        value_k,
        target: log_abs[..k].iter().sum(),
    })
}

/// Ky Fan `k` values of `log(Q*Z)` for `k = 1..n`, or `None` on the branch cut.
pub fn kyfan_profile(z: &ComplexMatrix, q: &ComplexMatrix) -> Result<Option<Vec<f64>>> {
    let l = match logm_principal(&q.adjoint_mul(z)) {
        Ok(l) => l,
        Err(LinalgError::BranchCut { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let s = singular_values(&l);
    Ok(Some(
        s.iter()
            .scan(0.0, |acc, x| {
                *acc += x;
                Some(*acc)
            })
            .collect(),
    ))
}

/// A family member with `Q₂₂ ≠ I` and the Ky Fan norm in which it stops being minimal.
#[derive(Debug, Clone)]
pub struct FamilyProbe {
    pub k: usize,
    /// Scale `t` with `Q₂₂ = exp(t·S)`.
    pub t: f64,
    pub value_k: f64,
    pub target_k: f64,
    /// First `k′` where the member exceeds the minimum, with the excess.
    pub failing_k: Option<(usize, f64)>,
}

#[derive(Debug, Clone)]
pub struct DescentProbe {
    pub start_norm: f64,
    /// Largest Ky Fan excess over the baseline at the descent limit.
    pub max_kyfan_excess: f64,
    pub achieves_all: bool,
    /// `‖Q − U_p‖_F` at the limit.
    pub distance_to_up: f64,
}

#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub family: Vec<FamilyProbe>,
    /// Ky Fan indices for which no admissible `Q₂₂ ≠ I` was found in the `t` schedule.
    pub family_skipped: Vec<usize>,
    pub descents: Vec<DescentProbe>,
    pub tol: f64,
    /// Every family member fails some `k′`, and every all-`k` descent limit is `U_p`.
    pub pass: bool,
}

const T_SCHEDULE: [f64; 8] = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125];
const DESCENT_STARTS: usize = 3;
const DESCENT_START_NORM: f64 = 0.3;
const ACHIEVE_TOL: f64 = 1e-6;

/// Draws a random unit skew-Hermitian `S` and returns the first admissible member
/// with `Q₂₂ = exp(t·S)` along a halving schedule of `t`, or `None` if none qualifies.
pub fn sample_admissible_member<R: Rng + ?Sized>(
    z: &ComplexMatrix,
    k: usize,
    rng: &mut R,
) -> Result<Option<(f64, KyFanMember)>> {
    let n = z.rows();
    if k == 0 || k >= n {
        return Err(LinalgError::Parameter(format!(
            "need 1 <= k < {n} for a nontrivial block, got {k}"
        )));
    }
    let m = n - k;
    let basis = skew_basis(m);
    let coords: Vec<f64> = (0..m * m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let s = skew_from_coords(&basis, &coords);
    let s = s.scale_real(1.0 / s.frobenius_norm());
    for &t in &T_SCHEDULE {
        let member = kyfan_minimizer_family(z, k, &expm(&s.scale_real(t))?)?;
        if member.admissible {
            return Ok(Some((t, member)));
        }
    }
    Ok(None)
}

/// Probes uniqueness of `U_p` as the simultaneous minimizer of all Ky Fan norms.
///
/// (a) For each `k < n`, a random `Q₂₂ = exp(t·S) ≠ I` admissible for `k` is built
/// and must exceed the minimum in some other Ky Fan norm. (b) Frobenius descents
/// started at `‖S₀‖_F = 0.3` whose limits attain the minimum in every Ky Fan norm
/// (within 10⁻⁶) must lie within `tol` of `U_p`.
pub fn uniqueness_probe(z: &ComplexMatrix, tol: f64, seed: u64) -> Result<UniquenessReport> {
    let f = permuted_svd_by_log_modulus(z)?;
    let n = f.sigma.len();
    let log_abs: Vec<f64> = f.sigma.iter().map(|s| s.ln().abs()).collect();
    for w in log_abs.windows(2) {
        if w[0] - w[1] < MIN_LOG_SEPARATION {
            return Err(LinalgError::Precondition(format!(
                "|log σ| values {} and {} closer than {MIN_LOG_SEPARATION}",
                w[0], w[1]
            )));
        }
    }
    let targets: Vec<f64> = log_abs
        .iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    let excess_tol = |t: f64| 1e-9 * (1.0 + t);

    let mut rng = rng_for(seed, 0);
    let mut family = Vec::new();
    let mut family_skipped = Vec::new();
    for k in 1..n {
        let Some((t, member)) = sample_admissible_member(z, k, &mut rng)? else {
            family_skipped.push(k);
            continue;
        };
        let profile =
            kyfan_profile(z, &member.q_hat)?.expect("admissible member is off the branch cut");
        let failing_k = (0..n)
            .map(|j| (j + 1, profile[j] - targets[j]))
            .find(|&(j, e)| e > excess_tol(targets[j - 1]));
        family.push(FamilyProbe {
            k,
            t,
            value_k: member.value_k,
            target_k: member.target,
            failing_k,
        });
    }

    let obj = Objective::new(z.clone(), NormSpec::Frobenius, Mode::FullLog)?;
    let basis = skew_basis(n);
    let mut descents = Vec::with_capacity(DESCENT_STARTS);
    for _ in 0..DESCENT_STARTS {
        let coords: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s0 = skew_from_coords(&basis, &coords);
        let s0 = s0.scale_real(DESCENT_START_NORM / s0.frobenius_norm());
        let r = local_descent(&obj, &s0, 500, 0.1)?;
        let max_kyfan_excess = match kyfan_profile(z, &r.q_final)? {
            Some(p) => p
                .iter()
                .zip(&targets)
                .map(|(v, t)| v - t)
                .fold(f64::NEG_INFINITY, f64::max),
            None => f64::INFINITY,
        };
        let achieves_all = max_kyfan_excess <= ACHIEVE_TOL * (1.0 + targets[n - 1]);
        descents.push(DescentProbe {
            start_norm: DESCENT_START_NORM,
            max_kyfan_excess,
            achieves_all,
            distance_to_up: (&r.q_final - obj.u_p()).frobenius_norm(),
        });
    }

    let pass = family.iter().all(|p| p.failing_k.is_some())
        && descents
            .iter()
            .all(|d| !d.achieves_all || d.distance_to_up <= tol);
    Ok(UniquenessReport {
        family,
        family_skipped,
        descents,
        tol,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densekit::{random_unitary, C64};

    fn phase(phi: f64) -> ComplexMatrix {
        ComplexMatrix::from_diag(&[C64::from_polar(1.0, phi)])
    }

    #[test]
    fn permuted_order_by_log_modulus() {
        let z = ComplexMatrix::from_real_diag(&[4.0, 1.0, 0.125]);
        let f = permuted_svd_by_log_modulus(&z).unwrap();
        assert_eq!(f.sigma.len(), 3);
        assert!((f.sigma[0] - 0.125).abs() < 1e-15);
        assert!((f.sigma[1] - 4.0).abs() < 1e-15);
        assert!((f.sigma[2] - 1.0).abs() < 1e-15);
        assert!(f.reconstruct().rel_dist(&z) < 1e-14);

        let big = ComplexMatrix::from_real_diag(&[5.0, 3.0, 2.0]);
        assert_eq!(
            permuted_svd_by_log_modulus(&big).unwrap().sigma,
            vec![5.0, 3.0, 2.0]
        );

        let u = random_unitary(3, 2).scale_real(2.0);
        assert!(
            permuted_svd_by_log_modulus(&u)
                .unwrap()
                .reconstruct()
                .rel_dist(&u)
                < 1e-13
        );
    }

    #[test]
    fn scalar_phase_fixture() {
        let z = ComplexMatrix::from_real_diag(&[4.0, 1.0]);
        let ok = kyfan_minimizer_family(&z, 1, &phase(1.0)).unwrap();
        assert!(ok.admissible);
        assert!((ok.condition_lhs - 1.0).abs() < 1e-12);
        assert!((ok.value_k - 4f64.ln()).abs() < 1e-12);
        let bad = kyfan_minimizer_family(&z, 1, &phase(3.0)).unwrap();
        assert!(!bad.admissible);
        assert!((bad.value_k - 3.0).abs() < 1e-12);
        // passes k = 1 but not k = 2
        let profile = kyfan_profile(&z, &ok.q_hat).unwrap().unwrap();
        assert!((profile[1] - (4f64.ln() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn identity_block_gives_polar_factor() {
        let z = crate::densekit::random_nonsingular(4, 2.0, 17);
        let up = crate::densekit::polar(&z).unwrap().unitary;
        for k in 1..=4 {
            let m = kyfan_minimizer_family(&z, k, &ComplexMatrix::identity(4 - k)).unwrap();
            assert!(m.admissible);
            assert!(m.q_hat.rel_dist(&up) < 1e-12);
            assert!((m.value_k - m.target).abs() < 1e-10);
        }
    }

    #[test]
    fn admissible_members_attain_the_minimum() {
        let z = crate::densekit::random_nonsingular(4, 3.0, 5);
        let mut rng = rng_for(9, 0);
        let mut hits = 0;
        for k in 1..4 {
            for _ in 0..5 {
                if let Some((_, m)) = sample_admissible_member(&z, k, &mut rng).unwrap() {
                    hits += 1;
                    assert!((m.value_k - m.target).abs() < 1e-9);
                }
                let q22 = crate::densekit::haar_unitary(4 - k, &mut rng);
                let m = kyfan_minimizer_family(&z, k, &q22).unwrap();
                assert!(m.value_k >= m.target - 1e-9);
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn probe_on_hermitian_pd() {
        let z = ComplexMatrix::from_real_diag(&[4.0, 1.6, 0.3]);
        let r = uniqueness_probe(&z, 1e-6, 3).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.family.len() + r.family_skipped.len(), 2);
        assert!(r.descents.iter().any(|d| d.achieves_all));
    }

    #[test]
    fn probe_rejects_ties() {
        let z = ComplexMatrix::from_real_diag(&[2.0, 0.5]);
        assert!(matches!(
            uniqueness_probe(&z, 1e-6, 0),
            Err(LinalgError::Precondition(_))
        ));
    }
}
