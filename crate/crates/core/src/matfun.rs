//! Matrix exponential, principal logarithm, primary logarithm branches and the
//! Hermitian / skew-Hermitian splitting.

use std::f64::consts::PI;

use crate::densekit::{hermitian_eig, inverse, schur_decompose, ComplexMatrix, Lu, C64, ONE, ZERO};
use crate::error::{LinalgError, Result};

/// Eigenvalues within this angle of the negative real axis are treated as on the cut.
pub const BRANCH_CUT_ANGLE_TOL: f64 = 1e-8;
/// Eigenvalues with modulus at or below this are treated as zero.
pub const BRANCH_CUT_MODULUS_TOL: f64 = 1e-12;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with the degree-13 Padé approximant.
pub fn expm(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(LinalgError::Dimension(
            "expm requires a square matrix".into(),
        ));
    }
    let n = x.rows();
    if n == 0 {
        return Ok(x.clone());
    }
    let norm = x.one_norm();
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = x.scale_real(0.5f64.powi(s));
    let b = &PADE13;
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);

    let lin = |c6: f64, c4: f64, c2: f64, c0: f64| -> ComplexMatrix {
        let mut m = a6.scale_real(c6);
        for ((o, &p4), &p2) in m.data_mut().iter_mut().zip(a4.data()).zip(a2.data()) {
            *o += p4 * c4 + p2 * c2;
        }
        if c0 != 0.0 {
            m = m.add_identity(C64::new(c0, 0.0));
        }
        m
    };
    let u_inner = &a6.matmul(&lin(b[13], b[11], b[9], 0.0)) + &lin(b[7], b[5], b[3], b[1]);
    let u = a.matmul(&u_inner);
    let v = &a6.matmul(&lin(b[12], b[10], b[8], 0.0)) + &lin(b[6], b[4], b[2], b[0]);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = Lu::new(&q)?.solve(&p);
    for _ in 0..s {
        r = r.matmul(&r);
    }
    Ok(r)
}

/// True when `z` lies within the branch-cut band of the principal logarithm.
pub fn on_branch_cut(z: C64) -> bool {
    z.norm() <= BRANCH_CUT_MODULUS_TOL || (PI - z.arg().abs()) <= BRANCH_CUT_ANGLE_TOL
}

/// Principal matrix logarithm: the logarithm whose eigenvalues have imaginary
/// parts in `(-π, π)`.
///
/// Hermitian positive definite input is handled through its eigendecomposition;
/// everything else goes through the Schur form and inverse scaling and squaring.
pub fn logm_principal(z: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !z.is_square() {
        return Err(LinalgError::Dimension(
            "logm requires a square matrix".into(),
        ));
    }
    if !z.is_finite() {
        return Err(LinalgError::NonFinite { row: 0, col: 0 });
    }
    if z.hermitian_deviation() <= 1e-14 * (1.0 + z.max_abs()) {
        if let Ok(l) = logm_hermitian_pd(z) {
            return Ok(l);
        }
    }
    let schur = schur_decompose(z)?;
    if let Some(&ev) = schur.t.diag().iter().find(|&&ev| on_branch_cut(ev)) {
        return Err(LinalgError::BranchCut { eigenvalue: ev });
    }
    let l = logm_upper_triangular(&schur.t)?;
    Ok(schur.q.matmul(&l).mul_adjoint(&schur.q))
}

/// Logarithm of a Hermitian positive definite matrix via its eigendecomposition.
pub fn logm_hermitian_pd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (v, w) = hermitian_eig(h)?;
    if let Some(&bad) = w.iter().find(|&&x| x <= BRANCH_CUT_MODULUS_TOL) {
        return Err(LinalgError::BranchCut {
            eigenvalue: C64::new(bad, 0.0),
        });
    }
    let logs: Vec<f64> = w.iter().map(|x| x.ln()).collect();
    Ok(hermitian_from_eig(&v, &logs))
}

/// `v·diag(values)·v*`, exactly Hermitian.
pub(crate) fn hermitian_from_eig(v: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let mut vd = v.clone();
    for j in 0..v.cols() {
        for i in 0..v.rows() {
            vd[(i, j)] *= values[j];
        }
    }
    let mut out = vd.mul_adjoint(v);
    let n = out.rows();
    for i in 0..n {
        out[(i, i)].im = 0.0;
        for j in i + 1..n {
            let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
            out[(i, j)] = avg;
            out[(j, i)] = avg.conj();
        }
    }
    out
}

/// Principal square root of an upper-triangular matrix by the column recurrence.
fn sqrtm_upper(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let mut r = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        r[(j, j)] = t[(j, j)].sqrt();
        for i in (0..j).rev() {
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            r[(i, j)] = s / (r[(i, i)] + r[(j, j)]);
        }
    }
    r
}

// Gauss–Legendre rule on [0, 1] with 7 points; the quadrature of
// log(1+x) = ∫₀¹ x/(1+tx) dt is exactly the [7/7] Padé approximant.
const GL7_NODES: [f64; 7] = [
    0.025446043828620736,
    0.12923440720030277,
    0.2970774243113014,
    0.5,
    0.7029225756886985,
    0.8707655927996972,
    0.9745539561713792,
];
const GL7_WEIGHTS: [f64; 7] = [
    0.06474248308443485,
    0.1398526957446383,
    0.19091502525255946,
    0.2089795918367347,
    0.19091502525255946,
    0.1398526957446383,
    0.06474248308443485,
];

/// Inverse scaling and squaring on an upper-triangular matrix.
fn logm_upper_triangular(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = t.rows();
    let mut r = t.clone();
    let mut squarings = 0u32;
    loop {
        let e_norm = r.add_identity(-ONE).one_norm();
        if e_norm <= 0.25 {
            break;
        }
        if squarings >= 64 {
            return Err(LinalgError::NoConvergence {
                iterations: squarings as usize,
            });
        }
        r = sqrtm_upper(&r);
        squarings += 1;
    }
    let e = r.add_identity(-ONE);
    let mut l = ComplexMatrix::zeros(n, n);
    for (&node, &w) in GL7_NODES.iter().zip(&GL7_WEIGHTS) {
        // (I + node·E)⁻¹·E, upper triangular
        let m = e.scale_real(node).add_identity(ONE);
        let x = crate::densekit::solve_upper_triangular(&m, &e);
        for (o, v) in l.data_mut().iter_mut().zip(x.data()) {
            *o += v * w;
        }
    }
    Ok(l.scale_real(2f64.powi(squarings as i32)))
}

/// A set of primary logarithms of one matrix.
#[derive(Debug, Clone)]
pub struct LogBranchSet {
    /// The principal logarithm.
    pub base: ComplexMatrix,
    /// Per-eigenvalue winding offsets; `offsets[0]` is all zeros.
    pub offsets: Vec<Vec<i64>>,
    pub branches: Vec<ComplexMatrix>,
}

/// Enumerates the primary logarithms `V·(log Λ + 2πi·diag(k))·V⁻¹` for every
/// offset vector with `|k_i| <= max_winding`.
pub fn log_branches(z: &ComplexMatrix, max_winding: u32) -> Result<LogBranchSet> {
    let base = logm_principal(z)?;
    let n = z.rows();
    let count = (2 * max_winding as u64 + 1)
        .checked_pow(n as u32)
        .unwrap_or(u64::MAX);
    if count > 1_000_000 {
        return Err(LinalgError::Parameter(format!(
            "{count} branches requested; limit is 10^6"
        )));
    }
    let schur = schur_decompose(z)?;
    let ev = schur.t.diag();
    let scale = ev.iter().map(|x| x.norm()).fold(1.0, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            if (ev[i] - ev[j]).norm() <= 1e-8 * scale {
                return Err(LinalgError::Unsupported(format!(
                    "repeated eigenvalue {} (non-primary logarithms are not enumerated)",
                    ev[i]
                )));
            }
        }
    }
    let y = triangular_eigenvectors(&schur.t);
    let v = schur.q.matmul(&y);
    let v_inv = inverse(&v)?;

    let k = max_winding as i64;
    let mut offsets = vec![vec![0i64; n]];
    let mut cur = vec![-k; n];
    loop {
        if cur.iter().any(|&c| c != 0) {
            offsets.push(cur.clone());
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            if cur[pos] < k {
                cur[pos] += 1;
                for c in cur.iter_mut().skip(pos + 1) {
                    *c = -k;
                }
                pos = usize::MAX;
                break;
            }
        }
        if pos != usize::MAX {
            break;
        }
    }

    let branches = offsets
        .iter()
        .map(|off| {
            if off.iter().all(|&c| c == 0) {
                return base.clone();
            }
            let shift: Vec<C64> = off
                .iter()
                .map(|&c| C64::new(0.0, 2.0 * PI * c as f64))
                .collect();
            let mut vs = v.clone();
            for j in 0..n {
                for i in 0..n {
                    vs[(i, j)] *= shift[j];
                }
            }
            &base + &vs.matmul(&v_inv)
        })
        .collect();
    Ok(LogBranchSet {
        base,
        offsets,
        branches,
    })
}

/// Eigenvectors of an upper-triangular matrix with distinct diagonal, as columns
/// (unit upper triangular, so column `j` has a 1 in row `j`).
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let mut y = ComplexMatrix::identity(n);
    for j in 0..n {
        let lam = t[(j, j)];
        for i in (0..j).rev() {
            let mut s = ZERO;
            for k in i + 1..=j {
                s += t[(i, k)] * y[(k, j)];
            }
            y[(i, j)] = -s / (t[(i, i)] - lam);
        }
    }
    y
}

/// Hermitian part `(X + X*)/2`.
pub fn sym_part(x: &ComplexMatrix) -> ComplexMatrix {
    assert!(x.is_square(), "sym_part requires a square matrix");
    let n = x.rows();
    ComplexMatrix::from_fn(n, n, |i, j| (x[(i, j)] + x[(j, i)].conj()) * 0.5)
}

/// Skew-Hermitian part `(X - X*)/2`.
pub fn skw_part(x: &ComplexMatrix) -> ComplexMatrix {
    assert!(x.is_square(), "skw_part requires a square matrix");
    let n = x.rows();
    ComplexMatrix::from_fn(n, n, |i, j| (x[(i, j)] - x[(j, i)].conj()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn exp_of_zero_and_nilpotent() {
        let e0 = expm(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(e0.rel_dist(&ComplexMatrix::identity(3)) < 1e-16);
        let n = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let en = expm(&n).unwrap();
        assert!(en.rel_dist(&ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn exp_of_rotation_generator() {
        let th = PI / 3.0;
        let x = ComplexMatrix::from_real(2, 2, &[0.0, th, -th, 0.0]);
        let r = expm(&x).unwrap();
        let want = ComplexMatrix::from_real(2, 2, &[th.cos(), th.sin(), -th.sin(), th.cos()]);
        assert!(r.rel_dist(&want) < 1e-15);
    }

    #[test]
    fn exp_with_scaling_matches_scalar() {
        let x = ComplexMatrix::from_diag(&[C64::new(20.0, 1.0), C64::new(-3.0, 0.5)]);
        let r = expm(&x).unwrap();
        let want = C64::new(20.0, 1.0).exp();
        assert!((r[(0, 0)] - want).norm() / want.norm() < 1e-13);
    }

    #[test]
    fn log_of_identity_and_diagonal() {
        assert!(
            logm_principal(&ComplexMatrix::identity(3))
                .unwrap()
                .frobenius_norm()
                < 1e-15
        );
        let d = ComplexMatrix::from_real_diag(&[2.0, 0.5, 7.0]);
        let l = logm_principal(&d).unwrap();
        let want = ComplexMatrix::from_real_diag(&[2f64.ln(), 0.5f64.ln(), 7f64.ln()]);
        assert!(l.rel_dist(&want) < 1e-15);
    }

    #[test]
    fn log_of_non_normal_triangular_roundtrips() {
        let z = ComplexMatrix::from_rows(&[
            vec![C64::new(3.0, 1.0), C64::new(5.0, 0.0), C64::new(0.0, -2.0)],
            vec![ZERO, C64::new(0.2, -0.1), C64::new(1.0, 1.0)],
            vec![ZERO, ZERO, C64::new(-1.0, 0.3)],
        ]);
        let l = logm_principal(&z).unwrap();
        assert!(expm(&l).unwrap().rel_dist(&z) < 1e-12);
    }

    #[test]
    fn real_input_gives_real_log() {
        let z = ComplexMatrix::from_real(3, 3, &[4.0, 1.0, 0.5, -1.0, 3.0, 0.2, 0.3, 0.1, 2.0]);
        let l = logm_principal(&z).unwrap();
        assert!(l.data().iter().all(|x| x.im.abs() < 1e-13));
    }

    #[test]
    fn branch_cut_is_rejected() {
        let z = ComplexMatrix::from_real_diag(&[1.0, -2.0]);
        match logm_principal(&z) {
            Err(LinalgError::BranchCut { eigenvalue }) => {
                assert!((eigenvalue.re + 2.0).abs() < 1e-14)
            }
            other => panic!("expected branch-cut error, got {other:?}"),
        }
        assert!(matches!(
            logm_principal(&ComplexMatrix::from_real_diag(&[1.0, 0.0])),
            Err(LinalgError::BranchCut { .. })
        ));
    }

    #[test]
    fn scalar_branches() {
        let z = ComplexMatrix::from_real(1, 1, &[E]);
        let set = log_branches(&z, 1).unwrap();
        assert_eq!(set.offsets, vec![vec![0], vec![-1], vec![1]]);
        let mut got: Vec<C64> = set.branches.iter().map(|b| b[(0, 0)]).collect();
        got.sort_by(|a, b| a.im.total_cmp(&b.im));
        let want = [
            C64::new(1.0, -2.0 * PI),
            C64::new(1.0, 0.0),
            C64::new(1.0, 2.0 * PI),
        ];
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-14);
        }
    }

    #[test]
    fn branches_reconstruct_and_start_with_principal() {
        let z = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 0.0, 0.5]);
        let set = log_branches(&z, 1).unwrap();
        assert_eq!(set.branches.len(), 9);
        assert_eq!(set.branches[0], logm_principal(&z).unwrap());
        for b in &set.branches {
            assert!(expm(b).unwrap().rel_dist(&z) < 1e-11);
        }
    }

    #[test]
    fn repeated_eigenvalues_unsupported() {
        let z = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 0.0, 2.0]);
        assert!(matches!(
            log_branches(&z, 1),
            Err(LinalgError::Unsupported(_))
        ));
    }

    #[test]
    fn sym_skw_split() {
        let x = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert_eq!(
            sym_part(&x),
            ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0])
        );
        assert_eq!(
            skw_part(&x),
            ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0])
        );
        assert_eq!(&sym_part(&x) + &skw_part(&x), x);
    }
}
