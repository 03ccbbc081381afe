//! Local minimization in the skew-Hermitian chart `Q(S) = U_p·exp(S)`, where
//! `S = 0` corresponds to the polar factor.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::densekit::{ComplexMatrix, C64};
use crate::error::{LinalgError, Result};
use crate::matfun::expm;

use super::objective::Objective;

/// Central-difference step for chart gradients.
pub const FD_STEP: f64 = 1e-6;

/// Orthonormal basis (Frobenius inner product) of the n×n skew-Hermitian matrices,
/// of real dimension n².
pub fn skew_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(n * n);
    for j in 0..n {
        let mut e = ComplexMatrix::zeros(n, n);
        e[(j, j)] = C64::new(0.0, 1.0);
        basis.push(e);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut re = ComplexMatrix::zeros(n, n);
            re[(i, j)] = C64::new(FRAC_1_SQRT_2, 0.0);
            re[(j, i)] = C64::new(-FRAC_1_SQRT_2, 0.0);
            basis.push(re);
            let mut im = ComplexMatrix::zeros(n, n);
            im[(i, j)] = C64::new(0.0, FRAC_1_SQRT_2);
            im[(j, i)] = C64::new(0.0, FRAC_1_SQRT_2);
            basis.push(im);
        }
    }
    basis
}

/// Skew-Hermitian matrix with the given coordinates.
pub fn skew_from_coords(basis: &[ComplexMatrix], coords: &[f64]) -> ComplexMatrix {
    let n = basis[0].rows();
    let mut s = ComplexMatrix::zeros(n, n);
    for (b, &c) in basis.iter().zip(coords) {
        if c == 0.0 {
            continue;
        }
        for (o, &v) in s.data_mut().iter_mut().zip(b.data()) {
            *o += v * c;
        }
    }
    s
}

/// Coordinates of a skew-Hermitian matrix in [`skew_basis`].
pub fn coords_of_skew(basis: &[ComplexMatrix], s: &ComplexMatrix) -> Vec<f64> {
    basis
        .iter()
        .map(|b| {
            b.data()
                .iter()
                .zip(s.data())
                .map(|(x, y)| (x.conj() * y).re)
                .sum()
        })
        .collect()
}

pub fn chart_point(u_p: &ComplexMatrix, s: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(u_p.matmul(&expm(s)?))
}

fn chart_value(obj: &Objective, s: &ComplexMatrix) -> Result<f64> {
    let q = chart_point(obj.u_p(), s)?;
    Ok(obj.evaluate_unchecked(&q)?.or_infinity())
}

/// Central-difference gradient of the objective in chart coordinates at `s`.
pub fn chart_gradient(obj: &Objective, s: &ComplexMatrix, h: f64) -> Result<Vec<f64>> {
    let basis = skew_basis(obj.dim());
    let x = coords_of_skew(&basis, s);
    gradient_at(obj, &basis, &x, h)
}

fn gradient_at(obj: &Objective, basis: &[ComplexMatrix], x: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut g = Vec::with_capacity(x.len());
    let mut xp = x.to_vec();
    for k in 0..x.len() {
        xp[k] = x[k] + h;
        let fp = chart_value(obj, &skew_from_coords(basis, &xp))?;
        xp[k] = x[k] - h;
        let fm = chart_value(obj, &skew_from_coords(basis, &xp))?;
        xp[k] = x[k];
        g.push((fp - fm) / (2.0 * h));
    }
    Ok(g)
}

/// How a descent run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescentStatus {
    /// Gradient or step size fell below its threshold.
    Converged,
    /// Iteration budget exhausted.
    MaxSteps,
    /// No decrease could be found, repeatedly (typically the branch cut or noise floor).
    Stalled,
}

#[derive(Debug, Clone)]
pub struct DescentResult {
    pub s_final: ComplexMatrix,
    pub q_final: ComplexMatrix,
    pub value: f64,
    pub baseline: f64,
    /// Objective value after each accepted step, starting with the initial value.
    pub history: Vec<f64>,
    pub steps: usize,
    pub status: DescentStatus,
    /// True when finite-difference quasi-Newton was used, false for compass search.
    pub gradient_mode: bool,
}

/// Local minimization from the chart point `s0`.
///
/// Smooth norms (Frobenius, Schatten p > 1) use BFGS on finite-difference
/// gradients with Armijo backtracking; other norms use compass search over the
/// skew-Hermitian basis. Points on the branch cut count as `+∞`, so steps that
/// cross it are rejected and shortened. The value sequence never increases.
pub fn local_descent(
    obj: &Objective,
    s0: &ComplexMatrix,
    steps: usize,
    step_size: f64,
) -> Result<DescentResult> {
    let n = obj.dim();
    if s0.rows() != n || !s0.is_square() {
        return Err(LinalgError::Dimension(
            "s0 must match the dimension of Z".into(),
        ));
    }
    let dev = (s0 + &s0.adjoint()).frobenius_norm();
    if dev > 1e-12 * (1.0 + s0.frobenius_norm()) {
        return Err(LinalgError::NotSkewHermitian { deviation: dev });
    }
    if !(step_size > 0.0) {
        return Err(LinalgError::Parameter("step_size must be positive".into()));
    }
    let basis = skew_basis(n);
    let x0 = coords_of_skew(&basis, s0);
    let f0 = chart_value(obj, s0)?;
    if !f0.is_finite() {
        return Err(LinalgError::Precondition(
            "starting point lies on the branch cut".into(),
        ));
    }
    let gradient_mode = obj.spec().is_smooth();
    let (x, f, history, used, status) = if gradient_mode {
        bfgs(obj, &basis, x0, f0, steps, step_size)?
    } else {
        compass(obj, &basis, x0, f0, steps, step_size)?
    };
    let s_final = skew_from_coords(&basis, &x);
    let q_final = chart_point(obj.u_p(), &s_final)?;
    Ok(DescentResult {
        s_final,
        q_final,
        value: f,
        baseline: obj.baseline(),
        history,
        steps: used,
        status,
        gradient_mode,
    })
}

type Run = (Vec<f64>, f64, Vec<f64>, usize, DescentStatus);

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn bfgs(
    obj: &Objective,
    basis: &[ComplexMatrix],
    mut x: Vec<f64>,
    mut f: f64,
    steps: usize,
    step_size: f64,
) -> Result<Run> {
    const GTOL: f64 = 1e-10;
    const MAX_HALVINGS: usize = 50;
    let dim = x.len();
    let mut history = vec![f];
    let mut g = gradient_at(obj, basis, &x, FD_STEP)?;
    // inverse Hessian approximation, row-major dim×dim
    let mut hinv = vec![0.0; dim * dim];
    let gnorm0 = dot(&g, &g).sqrt();
    let init = if gnorm0 > 0.0 {
        (step_size / gnorm0).min(1.0)
    } else {
        1.0
    };
    for i in 0..dim {
        hinv[i * dim + i] = init;
    }
    let mut fresh = true;
    let mut stalls = 0;
    for it in 0..steps {
        if dot(&g, &g).sqrt() <= GTOL {
            return Ok((x, f, history, it, DescentStatus::Converged));
        }
        let mut p: Vec<f64> = (0..dim)
            .map(|i| -dot(&hinv[i * dim..(i + 1) * dim], &g))
            .collect();
        let mut slope = dot(&p, &g);
        if slope >= 0.0 {
            // not a descent direction: reset to scaled steepest descent
            for v in hinv.iter_mut() {
                *v = 0.0;
            }
            for i in 0..dim {
                hinv[i * dim + i] = init;
            }
            p = g.iter().map(|v| -v * init).collect();
            slope = dot(&p, &g);
            fresh = true;
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let xn: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + alpha * b).collect();
            let fnew = chart_value(obj, &skew_from_coords(basis, &xn))?;
            if fnew.is_finite() && fnew <= f + 1e-4 * alpha * slope {
                accepted = Some((xn, fnew));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, fnew)) = accepted else {
            stalls += 1;
            if fresh || stalls >= 2 {
                let status = if dot(&g, &g).sqrt() <= 1e-6 {
                    DescentStatus::Converged
                } else {
                    DescentStatus::Stalled
                };
                return Ok((x, f, history, it, status));
            }
            for v in hinv.iter_mut() {
                *v = 0.0;
            }
            for i in 0..dim {
                hinv[i * dim + i] = init;
            }
            fresh = true;
            continue;
        };
        stalls = 0;
        let gn = gradient_at(obj, basis, &xn, FD_STEP)?;
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            if fresh {
                let scale = sy / dot(&y, &y);
                for v in hinv.iter_mut() {
                    *v = 0.0;
                }
                for i in 0..dim {
                    hinv[i * dim + i] = scale;
                }
                fresh = false;
            }
            let hy: Vec<f64> = (0..dim)
                .map(|i| dot(&hinv[i * dim..(i + 1) * dim], &y))
                .collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for i in 0..dim {
                for j in 0..dim {
                    hinv[i * dim + j] +=
                        (1.0 + yhy * rho) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
        x = xn;
        f = fnew;
        g = gn;
        history.push(f);
        if s.iter().map(|v| v * v).sum::<f64>().sqrt() <= 1e-14 {
            return Ok((x, f, history, it + 1, DescentStatus::Converged));
        }
    }
    Ok((x, f, history, steps, DescentStatus::MaxSteps))
}

fn compass(
    obj: &Objective,
    basis: &[ComplexMatrix],
    mut x: Vec<f64>,
    mut f: f64,
    steps: usize,
    step_size: f64,
) -> Result<Run> {
    const MIN_STEP: f64 = 1e-12;
    let mut history = vec![f];
    let mut delta = step_size;
    for it in 0..steps {
        if delta < MIN_STEP {
            return Ok((x, f, history, it, DescentStatus::Converged));
        }
        let mut improved = false;
        'dirs: for k in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut xn = x.clone();
                xn[k] += sign * delta;
                let fnew = chart_value(obj, &skew_from_coords(basis, &xn))?;
                if fnew < f {
                    x = xn;
                    f = fnew;
                    improved = true;
                    break 'dirs;
                }
            }
        }
        if improved {
            history.push(f);
        } else {
            delta *= 0.5;
        }
    }
    Ok((x, f, history, steps, DescentStatus::MaxSteps))
}
