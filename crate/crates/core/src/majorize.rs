//! Majorization, compound matrices and the trace inequalities built on them.
//!
//! Tolerance convention throughout: a prefix inequality `lhs <= rhs` passes when
//! `rhs - lhs >= -tol·(1 + |rhs|)`, and an equality passes when
//! `|lhs - rhs| <= tol·(1 + |rhs|)`.

use crate::densekit::{det, hermitian_eig, schur_decompose, ComplexMatrix, C64, ZERO};
use crate::error::{LinalgError, Result};
use crate::matfun::{expm, logm_principal, sym_part};

pub const DEFAULT_TOL: f64 = 1e-9;
/// Largest dimension accepted by the compound-matrix routines (C(8,4) = 70).
pub const MAX_COMPOUND_DIM: usize = 8;

#[inline]
fn passes_le(lhs: f64, rhs: f64, tol: f64) -> bool {
    rhs - lhs >= -tol * (1.0 + rhs.abs())
}

#[inline]
fn passes_eq(lhs: f64, rhs: f64, tol: f64) -> bool {
    (lhs - rhs).abs() <= tol * (1.0 + rhs.abs())
}

/// Outcome of testing `x ≺ y` (x majorized by y) on decreasingly sorted copies.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationVerdict {
    pub prefix_sums_x: Vec<f64>,
    pub prefix_sums_y: Vec<f64>,
    /// Every prefix sum of x is at most the corresponding prefix sum of y.
    pub weak: bool,
    /// `weak` and the totals agree.
    pub strong: bool,
    /// Smallest `prefix_y - prefix_x` over all prefixes.
    pub min_slack: f64,
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Tests whether `x` is (weakly / strongly) majorized by `y`.
pub fn majorizes(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationVerdict> {
    if x.len() != y.len() {
        return Err(LinalgError::Dimension(format!(
            "majorization needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let px = prefix_sums(&sorted_desc(x));
    let py = prefix_sums(&sorted_desc(y));
    let weak = px.iter().zip(&py).all(|(&a, &b)| passes_le(a, b, tol));
    let strong = weak
        && px
            .last()
            .zip(py.last())
            .is_none_or(|(&a, &b)| passes_eq(a, b, tol));
    let min_slack = px
        .iter()
        .zip(&py)
        .map(|(a, b)| b - a)
        .fold(f64::INFINITY, f64::min);
    Ok(MajorizationVerdict {
        prefix_sums_x: px,
        prefix_sums_y: py,
        weak,
        strong,
        min_slack,
    })
}

/// Weak majorization of the images `f(x) ≺_w f(y)` for a convex `f`, given `x ≺ y`.
pub fn convex_image_weak_majorization_with(
    x: &[f64],
    y: &[f64],
    f: impl Fn(f64) -> f64,
    tol: f64,
) -> Result<MajorizationVerdict> {
    let pre = majorizes(x, y, tol)?;
    if !pre.strong {
        return Err(LinalgError::Precondition(format!(
            "input pair is not strongly majorized (min slack {:e})",
            pre.min_slack
        )));
    }
    let fx: Vec<f64> = x.iter().map(|&v| f(v)).collect();
    let fy: Vec<f64> = y.iter().map(|&v| f(v)).collect();
    majorizes(&fx, &fy, tol)
}

/// `|x| ≺_w |y|` for a strongly majorized pair.
pub fn convex_image_weak_majorization(x: &[f64], y: &[f64]) -> Result<MajorizationVerdict> {
    convex_image_weak_majorization_with(x, y, f64::abs, DEFAULT_TOL)
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn check_compound_args(a: &ComplexMatrix, k: usize) -> Result<usize> {
    if !a.is_square() {
        return Err(LinalgError::Dimension(
            "compound requires a square matrix".into(),
        ));
    }
    let n = a.rows();
    if n > MAX_COMPOUND_DIM {
        return Err(LinalgError::Parameter(format!(
            "compound dimension {n} exceeds {MAX_COMPOUND_DIM}"
        )));
    }
    if k == 0 || k > n {
        return Err(LinalgError::Parameter(format!(
            "compound order {k} outside 1..={n}"
        )));
    }
    Ok(n)
}

/// k-th compound matrix: all k×k minors, rows and columns indexed by k-subsets
/// in lexicographic order.
pub fn compound(a: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    let n = check_compound_args(a, k)?;
    let subsets = k_subsets(n, k);
    let m = subsets.len();
    let mut out = ComplexMatrix::zeros(m, m);
    let mut sub = ComplexMatrix::zeros(k, k);
    for (r, rows) in subsets.iter().enumerate() {
        for (c, cols) in subsets.iter().enumerate() {
            for (i, &ri) in rows.iter().enumerate() {
                for (j, &cj) in cols.iter().enumerate() {
                    sub[(i, j)] = a[(ri, cj)];
                }
            }
            out[(r, c)] = det(&sub)?;
        }
    }
    Ok(out)
}

fn is_triangular(a: &ComplexMatrix) -> bool {
    let n = a.rows();
    let upper = (0..n).all(|i| (0..i).all(|j| a[(i, j)] == ZERO));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| a[(i, j)] == ZERO));
    upper || lower
}

/// Orders eigenvalues by modulus (descending), ties by real part (descending).
fn sort_by_modulus(ev: &mut [C64]) {
    ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)));
}

/// Eigenvalues of the k-th compound of `a`, sorted by modulus.
pub fn compound_eigenvalues(a: &ComplexMatrix, k: usize) -> Result<Vec<C64>> {
    let n = check_compound_args(a, k)?;
    let mut ev: Vec<C64> = if is_triangular(a) {
        let d = a.diag();
        k_subsets(n, k)
            .iter()
            .map(|s| s.iter().map(|&i| d[i]).product())
            .collect()
    } else {
        let c = compound(a, k)?;
        if c.is_hermitian(1e-12) {
            hermitian_eig(&c)?
                .1
                .into_iter()
                .map(|x| C64::new(x, 0.0))
                .collect()
        } else {
            schur_decompose(&c)?.eigenvalues()
        }
    };
    sort_by_modulus(&mut ev);
    Ok(ev)
}

/// `tr_i^k(a)`: the sum of the `i` largest-in-modulus eigenvalues of the k-th compound.
///
/// The sum is complex for general `a`; it is real whenever the compound has a
/// real spectrum (for instance Hermitian `a`).
pub fn partial_compound_trace(a: &ComplexMatrix, k: usize, i: usize) -> Result<C64> {
    let ev = compound_eigenvalues(a, k)?;
    if i == 0 || i > ev.len() {
        return Err(LinalgError::Parameter(format!(
            "partial trace index {i} outside 1..={}",
            ev.len()
        )));
    }
    Ok(ev[..i].iter().sum())
}

/// One `(k, i)` comparison of a trace inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceComparison {
    pub k: usize,
    pub i: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
}

/// Cohen's inequality `tr_i^k(exp A·exp A*) <= tr_i^k(exp(A + A*))` for every `(k, i)`.
#[derive(Debug, Clone)]
pub struct CohenReport {
    pub entries: Vec<TraceComparison>,
    pub pass: bool,
    pub min_slack: f64,
    /// Largest `|slack| / (1 + |rhs|)`; near zero for normal `a`.
    pub max_rel_gap: f64,
}

/// Partial traces of a Hermitian matrix's compounds, for every `(k, i)`.
fn hermitian_partial_traces(m: &ComplexMatrix) -> Result<Vec<Vec<f64>>> {
    let n = m.rows();
    (1..=n)
        .map(|k| {
            let ev = compound_eigenvalues(m, k)?;
            Ok(prefix_sums(&ev.iter().map(|z| z.re).collect::<Vec<_>>()))
        })
        .collect()
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    sym_part(m)
}

pub fn cohen_check(a: &ComplexMatrix, tol: f64) -> Result<CohenReport> {
    if !a.is_square() {
        return Err(LinalgError::Dimension(
            "cohen_check requires a square matrix".into(),
        ));
    }
    let ea = expm(a)?;
    let lhs_m = hermitize(&ea.mul_adjoint(&ea));
    let rhs_m = hermitize(&expm(&(a + &a.adjoint()))?);
    let lhs = hermitian_partial_traces(&lhs_m)?;
    let rhs = hermitian_partial_traces(&rhs_m)?;
    let mut entries = Vec::new();
    for (k, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
        for (i, (&lv, &rv)) in l.iter().zip(r).enumerate() {
            entries.push(TraceComparison {
                k: k + 1,
                i: i + 1,
                lhs: lv,
                rhs: rv,
                slack: rv - lv,
            });
        }
    }
    let pass = entries.iter().all(|e| passes_le(e.lhs, e.rhs, tol));
    let min_slack = entries
        .iter()
        .map(|e| e.slack)
        .fold(f64::INFINITY, f64::min);
    let max_rel_gap = entries
        .iter()
        .map(|e| e.slack.abs() / (1.0 + e.rhs.abs()))
        .fold(0.0, f64::max);
    Ok(CohenReport {
        entries,
        pass,
        min_slack,
        max_rel_gap,
    })
}

/// The log-majorization produced by the Hermitian part of `log(q*·diag(d))`.
#[derive(Debug, Clone)]
pub struct LogMajorizationWitness {
    /// Eigenvalues of `exp(sym log(q*·diag(d)))`, descending.
    pub x: Vec<f64>,
    /// Verdict for `(log d) ≺ (log x)`.
    pub verdict: MajorizationVerdict,
    /// `|x_1⋯x_n - d_1⋯d_n| / (d_1⋯d_n)`.
    pub det_rel_error: f64,
    /// Every prefix product satisfies `x_1²⋯x_k² >= d_1²⋯d_k²` (within tolerance, in logs).
    pub squared_chain_holds: bool,
}

fn check_positive_descending(d: &[f64]) -> Result<()> {
    if d.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(LinalgError::Precondition(
            "d must be positive and finite".into(),
        ));
    }
    if d.windows(2).any(|w| w[0] < w[1]) {
        return Err(LinalgError::Precondition(
            "d must be sorted in descending order".into(),
        ));
    }
    Ok(())
}

pub fn log_majorization_witness(q: &ComplexMatrix, d: &[f64]) -> Result<LogMajorizationWitness> {
    log_majorization_witness_tol(q, d, DEFAULT_TOL)
}

pub fn log_majorization_witness_tol(
    q: &ComplexMatrix,
    d: &[f64],
    tol: f64,
) -> Result<LogMajorizationWitness> {
    check_positive_descending(d)?;
    if q.rows() != d.len() || !q.is_square() {
        return Err(LinalgError::Dimension(
            "q must be square with the length of d".into(),
        ));
    }
    if !q.is_unitary(1e-8) {
        return Err(LinalgError::NotUnitary {
            deviation: q.unitarity_residual(),
        });
    }
    let qd = q.adjoint_mul(&ComplexMatrix::from_real_diag(d));
    let s = sym_part(&logm_principal(&qd)?);
    // eigenvalues of exp(S) are exp(eigenvalues of S)
    let (_, log_x) = hermitian_eig(&s)?;
    let x: Vec<f64> = log_x.iter().map(|v| v.exp()).collect();
    let log_d: Vec<f64> = d.iter().map(|v| v.ln()).collect();
    let verdict = majorizes(&log_d, &log_x, tol)?;
    let det_x: f64 = log_x.iter().sum::<f64>().exp();
    let det_d: f64 = d.iter().product();
    let det_rel_error = (det_x - det_d).abs() / det_d;
    let squared_chain_holds = prefix_sums(&log_x)
        .iter()
        .zip(prefix_sums(&log_d))
        .all(|(&lx, ld)| passes_le(2.0 * ld, 2.0 * lx, tol));
    Ok(LogMajorizationWitness {
        x,
        verdict,
        det_rel_error,
        squared_chain_holds,
    })
}

/// Elementary symmetric polynomial `e_i(v)`.
pub fn elem_sym_poly(v: &[f64], i: usize) -> Result<f64> {
    if i > v.len() {
        return Err(LinalgError::Parameter(format!(
            "e_{i} undefined for {} variables",
            v.len()
        )));
    }
    Ok(elem_sym_all(v)[i])
}

/// `[e_0(v), …, e_n(v)]`.
pub fn elem_sym_all(v: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; v.len() + 1];
    e[0] = 1.0;
    for (m, &x) in v.iter().enumerate() {
        for j in (1..=m + 1).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// Sum-of-squared-logarithms spot check for positive triples.
///
/// Conditions: `e_1(y) >= e_1(a)`, `e_2(y) >= e_2(a)` and `e_3(y) = e_3(a)`,
/// each within `tol`. Conclusion: `Σ log² y_i >= Σ log² a_i - tol`.
/// Returns `(conditions_hold, conclusion_holds)`.
pub fn ssli_check(y: &[f64], a: &[f64], tol: f64) -> Result<(bool, bool)> {
    if y.len() != 3 || a.len() != 3 {
        return Err(LinalgError::Parameter(
            "ssli_check is defined for triples".into(),
        ));
    }
    if y.iter().chain(a).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(LinalgError::Precondition(
            "ssli_check requires positive entries".into(),
        ));
    }
    let ey = elem_sym_all(y);
    let ea = elem_sym_all(a);
    let conditions = passes_le(ea[1], ey[1], tol)
        && passes_le(ea[2], ey[2], tol)
        && passes_eq(ey[3], ea[3], tol);
    let sq = |v: &[f64]| v.iter().map(|x| x.ln().powi(2)).sum::<f64>();
    let conclusion = sq(y) >= sq(a) - tol;
    Ok((conditions, conclusion))
}

/// Sum of the `i` largest k-fold products of `v`, for every `(k, i)`: the partial
/// compound traces of `diag(v)` for nonnegative `v`.
pub fn top_product_sums(v: &[f64]) -> Vec<Vec<f64>> {
    let n = v.len();
    (1..=n)
        .map(|k| {
            let mut prods: Vec<f64> = k_subsets(n, k)
                .iter()
                .map(|s| s.iter().map(|&j| v[j]).product())
                .collect();
            prods.sort_by(|a, b| b.total_cmp(a));
            prefix_sums(&prods)
        })
        .collect()
}

/// The elementary-symmetric inequality chain implied by Cohen's inequality.
#[derive(Debug, Clone)]
pub struct SymmetricChainReport {
    /// `y_i = x_i²` (x from the log-majorization witness).
    pub y: Vec<f64>,
    /// `a_i = d_i²`.
    pub a: Vec<f64>,
    /// For each `(k, i)`: the `i` largest k-products of `y` against those of `a`
    /// (`rhs` is the `y` side, `lhs` the `a` side).
    pub entries: Vec<TraceComparison>,
    pub inequalities_hold: bool,
    /// `|e_n(y) - e_n(a)| / e_n(a)`.
    pub det_rel_error: f64,
    pub det_equal: bool,
}

/// Builds the chain from already-computed `y` and `a`.
pub fn symmetric_chain_from_values(y: &[f64], a: &[f64], tol: f64) -> Result<SymmetricChainReport> {
    if y.len() != a.len() {
        return Err(LinalgError::Dimension("chain needs equal lengths".into()));
    }
    let ty = top_product_sums(y);
    let ta = top_product_sums(a);
    let mut entries = Vec::new();
    for (k, (ry, ra)) in ty.iter().zip(&ta).enumerate() {
        for (i, (&vy, &va)) in ry.iter().zip(ra).enumerate() {
            entries.push(TraceComparison {
                k: k + 1,
                i: i + 1,
                lhs: va,
                rhs: vy,
                slack: vy - va,
            });
        }
    }
    let inequalities_hold = entries.iter().all(|e| passes_le(e.lhs, e.rhs, tol));
    let en_y: f64 = y.iter().product();
    let en_a: f64 = a.iter().product();
    let det_rel_error = (en_y - en_a).abs() / en_a;
    Ok(SymmetricChainReport {
        y: y.to_vec(),
        a: a.to_vec(),
        entries,
        inequalities_hold,
        det_rel_error,
        det_equal: det_rel_error <= tol,
    })
}

pub fn cohen_symmetric_chain(
    q: &ComplexMatrix,
    d: &[f64],
    tol: f64,
) -> Result<SymmetricChainReport> {
    let w = log_majorization_witness_tol(q, d, tol)?;
    let y: Vec<f64> = w.x.iter().map(|v| v * v).collect();
    let a: Vec<f64> = d.iter().map(|v| v * v).collect();
    symmetric_chain_from_values(&y, &a, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densekit::{complex_gaussian, random_unitary, rng_for};

    #[test]
    fn majorization_fixtures() {
        let v = majorizes(&[2.0, 2.0], &[3.0, 1.0], DEFAULT_TOL).unwrap();
        assert!(v.weak && v.strong);
        assert!(
            !majorizes(&[3.0, 1.0], &[2.0, 2.0], DEFAULT_TOL)
                .unwrap()
                .weak
        );
        let v = majorizes(&[1.0, 1.0], &[3.0, 1.0], DEFAULT_TOL).unwrap();
        assert!(v.weak && !v.strong);
        assert!(majorizes(&[1.0], &[1.0, 2.0], DEFAULT_TOL).is_err());
    }

    #[test]
    fn convex_image_fixtures() {
        let v = convex_image_weak_majorization(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert!(v.weak && v.min_slack == 0.0);
        assert!(
            convex_image_weak_majorization(&[2.0, 2.0], &[3.0, 1.0])
                .unwrap()
                .weak
        );
        let v = convex_image_weak_majorization(&[1.0, -3.0], &[2.0, -4.0]).unwrap();
        assert!(v.weak);
        assert_eq!(v.prefix_sums_x, vec![3.0, 4.0]);
        assert_eq!(v.prefix_sums_y, vec![4.0, 6.0]);
        assert!(matches!(
            convex_image_weak_majorization(&[1.0, 1.0], &[3.0, 1.0]),
            Err(LinalgError::Precondition(_))
        ));
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            k_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(k_subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(binomial(8, 4), 70);
    }

    #[test]
    fn compound_of_diagonal() {
        let x = [2.0, 3.0, 5.0, 7.0];
        let c = compound(&ComplexMatrix::from_real_diag(&x), 2).unwrap();
        let want = [6.0, 10.0, 14.0, 15.0, 21.0, 35.0];
        assert!(c.rel_dist(&ComplexMatrix::from_real_diag(&want)) < 1e-15);
        let c4 = compound(&ComplexMatrix::from_real_diag(&[4.0, 3.0, 2.0, 1.0]), 4).unwrap();
        assert_eq!((c4.rows(), c4.cols()), (1, 1));
        assert!((c4[(0, 0)].re - 24.0).abs() < 1e-13);
    }

    #[test]
    fn first_compound_is_identity_map() {
        let a = complex_gaussian(3, 3, &mut rng_for(3, 0));
        assert!(compound(&a, 1).unwrap().rel_dist(&a) < 1e-16);
        assert!(compound(&a, 4).is_err());
        assert!(compound(&a, 0).is_err());
    }

    #[test]
    fn partial_trace_fixtures() {
        let d = ComplexMatrix::from_real_diag(&[4.0, 3.0, 2.0, 1.0]);
        // eigenvalues of the 2nd compound by brute force: all pairwise products
        let mut prods: Vec<f64> = k_subsets(4, 2)
            .iter()
            .map(|s| [4.0, 3.0, 2.0, 1.0][s[0]] * [4.0, 3.0, 2.0, 1.0][s[1]])
            .collect();
        prods.sort_by(|a, b| b.total_cmp(a));
        let brute: f64 = prods[..3].iter().sum();
        assert_eq!(brute, 26.0);
        assert!((partial_compound_trace(&d, 2, 3).unwrap().re - 26.0).abs() < 1e-13);
        assert!((partial_compound_trace(&d, 1, 1).unwrap().re - 4.0).abs() < 1e-15);
        for k in 1..=4 {
            let want: f64 = [4.0, 3.0, 2.0, 1.0][..k].iter().product();
            assert!((partial_compound_trace(&d, k, 1).unwrap().re - want).abs() < 1e-12);
        }
        assert!(partial_compound_trace(&d, 2, 7).is_err());
    }

    #[test]
    fn non_triangular_path_agrees_with_products() {
        // Hermitian input goes through compound + eigensolver
        let mut rng = rng_for(5, 1);
        let spectrum = [3.0, 1.5, 0.5];
        let h = crate::densekit::hermitian_with_spectrum(&spectrum, &mut rng);
        let t = partial_compound_trace(&h, 2, 2).unwrap();
        assert!((t.re - (4.5 + 1.5)).abs() < 1e-12 && t.im.abs() < 1e-12);
    }

    #[test]
    fn cohen_closed_form_nilpotent() {
        let a = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let r = cohen_check(&a, DEFAULT_TOL).unwrap();
        let e = r.entries.iter().find(|e| e.k == 1 && e.i == 2).unwrap();
        assert!((e.lhs - 3.0).abs() < 1e-12);
        assert!((e.rhs - 2.0 * 1f64.cosh()).abs() < 1e-12);
        assert!(e.slack > 0.0 && r.pass);
    }

    #[test]
    fn cohen_equality_for_hermitian_and_zero() {
        let h = ComplexMatrix::from_real(3, 3, &[1.0, 0.5, 0.0, 0.5, -0.3, 0.2, 0.0, 0.2, 0.4]);
        let r = cohen_check(&h, DEFAULT_TOL).unwrap();
        assert!(r.pass && r.max_rel_gap < 1e-12);
        let r0 = cohen_check(&ComplexMatrix::zeros(3, 3), DEFAULT_TOL).unwrap();
        assert_eq!(r0.entries.len(), 3 + 3 + 1);
        for e in &r0.entries {
            // compounds of the identity: partial traces count the chosen eigenvalues
            assert!((e.lhs - e.i as f64).abs() < 1e-12 && e.slack.abs() < 1e-12);
        }
    }

    #[test]
    fn witness_trivial_cases() {
        let d = [3.0, 1.0, 0.25];
        let w = log_majorization_witness(&ComplexMatrix::identity(3), &d).unwrap();
        for (x, d) in w.x.iter().zip(&d) {
            assert!((x - d).abs() < 1e-13);
        }
        assert!(w.verdict.strong && w.verdict.min_slack.abs() < 1e-13);

        let q = ComplexMatrix::from_diag(&[C64::from_polar(1.0, 2.5)]);
        let w1 = log_majorization_witness(&q, &[1.7]).unwrap();
        assert!((w1.x[0] - 1.7).abs() < 1e-14);
        assert!(log_majorization_witness(&ComplexMatrix::identity(2), &[1.0, 2.0]).is_err());
    }

    #[test]
    fn witness_two_by_two_random() {
        for seed in 0..50 {
            let q = random_unitary(2, seed);
            let w = match log_majorization_witness(&q, &[2.0, 0.5]) {
                Ok(w) => w,
                Err(LinalgError::BranchCut { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            assert!(w.verdict.strong && w.squared_chain_holds);
            assert!(w.x[0].ln() >= 2f64.ln() - 1e-12);
            assert!(w.det_rel_error < 1e-12);
        }
    }

    #[test]
    fn elementary_symmetric_fixtures() {
        let y = [2.0, 3.0, 5.0];
        assert_eq!(elem_sym_poly(&y, 0).unwrap(), 1.0);
        assert_eq!(elem_sym_poly(&y, 1).unwrap(), 10.0);
        assert_eq!(elem_sym_poly(&y, 2).unwrap(), 6.0 + 10.0 + 15.0);
        assert_eq!(elem_sym_poly(&y, 3).unwrap(), 30.0);
        assert_eq!(elem_sym_poly(&[1.0, 1.0, 1.0], 2).unwrap(), 3.0);
        assert!(elem_sym_poly(&y, 4).is_err());
    }

    #[test]
    fn ssli_fixtures() {
        assert_eq!(
            ssli_check(&[2.0, 3.0, 0.5], &[2.0, 3.0, 0.5], 1e-12).unwrap(),
            (true, true)
        );
        assert_eq!(
            ssli_check(&[4.0, 1.0, 1.0], &[2.0, 2.0, 1.0], 1e-12).unwrap(),
            (true, true)
        );
        assert!(
            !ssli_check(&[1.0, 1.0, 1.0], &[4.0, 1.0, 1.0], 1e-12)
                .unwrap()
                .0
        );
        // a strict e_3 inequality is not enough for the conclusion
        let (cond, concl) = ssli_check(&[1.0, 1.0, 1.0], &[0.5, 0.5, 0.5], 1e-12).unwrap();
        assert!(!cond && !concl);
        assert!(ssli_check(&[1.0, 1.0], &[1.0, 1.0], 1e-12).is_err());
        assert!(ssli_check(&[1.0, 0.0, 1.0], &[1.0, 1.0, 1.0], 1e-12).is_err());
    }

    #[test]
    fn chain_uses_largest_products_not_lexicographic_prefix() {
        let y = [4.0, 3.0, 2.0, 1.0];
        let top = top_product_sums(&y);
        // k = 2, i = 3: y1y2 + y1y3 + max(y1y4, y2y3)
        assert_eq!(top[1][2], 12.0 + 8.0 + 6.0);
        let naive = 12.0 + 8.0 + 4.0;
        assert!(top[1][2] > naive);
        let r = symmetric_chain_from_values(&y, &y, 1e-12).unwrap();
        assert!(r.inequalities_hold && r.det_equal);
    }

    #[test]
    fn chain_identity_is_all_equalities() {
        let r = cohen_symmetric_chain(&ComplexMatrix::identity(3), &[2.0, 1.0, 0.3], 1e-9).unwrap();
        assert!(r.entries.iter().all(|e| e.slack.abs() < 1e-12));
        assert!(r.det_equal);
    }

    #[test]
    fn inverse_data_adds_only_the_determinant_equality() {
        let mut checked = 0;
        for seed in 0..40 {
            let q = random_unitary(3, 100 + seed);
            let d = [2.5, 1.1, 0.3];
            let Ok(r) = cohen_symmetric_chain(&q, &d, 1e-9) else {
                continue;
            };
            let inv_y: Vec<f64> = r.y.iter().map(|v| 1.0 / v).collect();
            let inv_a: Vec<f64> = r.a.iter().map(|v| 1.0 / v).collect();
            let inv = symmetric_chain_from_values(&inv_y, &inv_a, 1e-9).unwrap();
            let en_y: f64 = r.y.iter().product();
            let en_a: f64 = r.a.iter().product();
            let n = 3;
            for e in &inv.entries {
                if e.k == n {
                    // the reversed determinant inequality
                    let orig = r.entries.iter().find(|o| o.k == n).unwrap();
                    assert!((e.rhs * orig.rhs - 1.0).abs() < 1e-12);
                    continue;
                }
                let orig = r
                    .entries
                    .iter()
                    .find(|o| o.k == n - e.k && o.i == e.i)
                    .unwrap();
                assert!((e.rhs * en_y - orig.rhs).abs() <= 1e-10 * orig.rhs);
                assert!((e.lhs * en_a - orig.lhs).abs() <= 1e-10 * orig.lhs);
            }
            checked += 1;
        }
        assert!(checked > 30);
    }
}
