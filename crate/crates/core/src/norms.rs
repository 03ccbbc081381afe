//! Unitarily invariant norms, evaluated as symmetric gauge functions of the
//! singular values, and the weighted Hermitian / skew-Hermitian objective.

use std::fmt;
use std::str::FromStr;

use crate::densekit::{self, ComplexMatrix};
use crate::error::{LinalgError, Result};
use crate::matfun::{skw_part, sym_part};

/// A unitarily invariant norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    Frobenius,
    Spectral,
    /// Sum of the `k` largest singular values.
    KyFan(usize),
    /// `ℓ_p` norm of the singular values, `p >= 1`.
    Schatten(f64),
}

impl NormSpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            NormSpec::KyFan(k) if k == 0 || k > dim => Err(LinalgError::Parameter(format!(
                "Ky Fan index {k} outside 1..={dim}"
            ))),
            NormSpec::Schatten(p) if !(p >= 1.0) || !p.is_finite() => Err(LinalgError::Parameter(
                format!("Schatten exponent {p} must be a finite value >= 1"),
            )),
            _ => Ok(()),
        }
    }

    /// Applies the gauge function to a vector of singular values (any order, any sign).
    pub fn gauge(&self, sigma: &[f64]) -> Result<f64> {
        self.validate(sigma.len())?;
        let mut s: Vec<f64> = sigma.iter().map(|x| x.abs()).collect();
        Ok(match *self {
            NormSpec::Frobenius => s.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormSpec::Spectral => s.iter().copied().fold(0.0, f64::max),
            NormSpec::KyFan(k) => {
                s.sort_by(|a, b| b.total_cmp(a));
                s[..k].iter().sum()
            }
            NormSpec::Schatten(p) => {
                if p == 1.0 {
                    s.iter().sum()
                } else {
                    let m = s.iter().copied().fold(0.0, f64::max);
                    if m == 0.0 {
                        0.0
                    } else {
                        m * s.iter().map(|x| (x / m).powf(p)).sum::<f64>().powf(1.0 / p)
                    }
                }
            }
        })
    }

    /// Gauge of a descending, nonnegative vector without validation or copying.
    /// Caller guarantees the ordering and the Ky Fan range.
    pub(crate) fn gauge_sorted(&self, sigma: &[f64]) -> f64 {
        match *self {
            NormSpec::Frobenius => sigma.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormSpec::Spectral => sigma.first().copied().unwrap_or(0.0),
            NormSpec::KyFan(k) => sigma[..k].iter().sum(),
            NormSpec::Schatten(p) => {
                if p == 1.0 {
                    sigma.iter().sum()
                } else {
                    let m = sigma.first().copied().unwrap_or(0.0);
                    if m == 0.0 {
                        0.0
                    } else {
                        m * sigma
                            .iter()
                            .map(|x| (x / m).powf(p))
                            .sum::<f64>()
                            .powf(1.0 / p)
                    }
                }
            }
        }
    }

    /// True for norms that are differentiable away from repeated/zero singular values.
    pub fn is_smooth(&self) -> bool {
        match *self {
            NormSpec::Frobenius => true,
            NormSpec::Schatten(p) => p > 1.0,
            _ => false,
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Frobenius => write!(f, "fro"),
            NormSpec::Spectral => write!(f, "spec"),
            NormSpec::KyFan(k) => write!(f, "kyfan:{k}"),
            NormSpec::Schatten(p) => write!(f, "schatten:{p}"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = LinalgError;

    /// Parses `fro`, `spec`, `kyfan:<k>` or `schatten:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || {
            LinalgError::Parameter(format!(
                "unrecognized norm '{s}' (expected fro, spec, kyfan:<k>, schatten:<p>)"
            ))
        };
        match s {
            "fro" => return Ok(NormSpec::Frobenius),
            "spec" => return Ok(NormSpec::Spectral),
            _ => {}
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "kyfan" => {
                let k: usize = arg.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(LinalgError::Parameter(
                        "Ky Fan index must be at least 1".into(),
                    ));
                }
                Ok(NormSpec::KyFan(k))
            }
            "schatten" => {
                let p: f64 = arg.parse().map_err(|_| bad())?;
                let spec = NormSpec::Schatten(p);
                spec.validate(usize::MAX)?;
                Ok(spec)
            }
            _ => Err(bad()),
        }
    }
}

/// The norm grid used by the verification suites for dimension `n`:
/// Frobenius, spectral, every Ky Fan norm, and Schatten 1, 1.5, 3.
pub fn norm_grid(n: usize) -> Vec<NormSpec> {
    let mut grid = vec![NormSpec::Frobenius, NormSpec::Spectral];
    grid.extend((1..=n).map(NormSpec::KyFan));
    grid.extend([
        NormSpec::Schatten(1.0),
        NormSpec::Schatten(1.5),
        NormSpec::Schatten(3.0),
    ]);
    grid
}

/// Singular values, descending.
pub fn singular_values(x: &ComplexMatrix) -> Vec<f64> {
    densekit::singular_values(x).expect("one-sided Jacobi failed to converge")
}

pub fn ui_norm(x: &ComplexMatrix, spec: NormSpec) -> Result<f64> {
    spec.validate(x.rows().min(x.cols()))?;
    Ok(spec.gauge_sorted(&singular_values(x)))
}

/// Weights `(μ, μ_c)` of the objective `μ‖sym X‖ + μ_c‖skw X‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymSkwWeights {
    mu: f64,
    mu_c: f64,
}

impl SymSkwWeights {
    pub fn new(mu: f64, mu_c: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(LinalgError::Parameter(format!(
                "mu must be positive, got {mu}"
            )));
        }
        if !(mu_c >= 0.0 && mu_c.is_finite()) {
            return Err(LinalgError::Parameter(format!(
                "mu_c must be nonnegative, got {mu_c}"
            )));
        }
        Ok(Self { mu, mu_c })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn mu_c(&self) -> f64 {
        self.mu_c
    }
}

/// `μ·‖sym x‖ + μ_c·‖skw x‖`.
pub fn sym_skw_objective(x: &ComplexMatrix, w: SymSkwWeights, spec: NormSpec) -> Result<f64> {
    Ok(w.mu * ui_norm(&sym_part(x), spec)? + w.mu_c * ui_norm(&skw_part(x), spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densekit::{random_unitary, C64};

    #[test]
    fn singular_value_fixtures() {
        let u = random_unitary(3, 4);
        assert!(singular_values(&u).iter().all(|s| (s - 1.0).abs() < 1e-14));
        assert_eq!(
            singular_values(&ComplexMatrix::from_real_diag(&[-3.0, 2.0])),
            vec![3.0, 2.0]
        );
    }

    #[test]
    fn norm_fixtures() {
        let d = ComplexMatrix::from_real_diag(&[3.0, -2.0, 1.0]);
        assert_eq!(ui_norm(&d, NormSpec::KyFan(2)).unwrap(), 5.0);
        let s2 = ui_norm(&d, NormSpec::Schatten(2.0)).unwrap();
        assert!((s2 - 14f64.sqrt()).abs() < 1e-15);
        assert!((s2 - ui_norm(&d, NormSpec::Frobenius).unwrap()).abs() < 1e-15);
        let u = random_unitary(4, 1);
        assert!((ui_norm(&u, NormSpec::Spectral).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ky_fan_out_of_range() {
        let d = ComplexMatrix::identity(2);
        assert!(matches!(
            ui_norm(&d, NormSpec::KyFan(3)),
            Err(LinalgError::Parameter(_))
        ));
        assert!(matches!(
            ui_norm(&d, NormSpec::KyFan(0)),
            Err(LinalgError::Parameter(_))
        ));
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for text in ["fro", "spec", "kyfan:3", "schatten:1.5"] {
            let spec: NormSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("schatten:0.5".parse::<NormSpec>().is_err());
        assert!("kyfan:0".parse::<NormSpec>().is_err());
        assert!("nuclear".parse::<NormSpec>().is_err());
    }

    #[test]
    fn objective_fixtures() {
        let h = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, -1.0]);
        let w = SymSkwWeights::new(2.0, 0.7).unwrap();
        let v = sym_skw_objective(&h, w, NormSpec::Frobenius).unwrap();
        assert!((v - 2.0 * ui_norm(&h, NormSpec::Frobenius).unwrap()).abs() < 1e-14);

        let x = ComplexMatrix::from_rows(&[
            vec![C64::new(1.0, 0.0), C64::new(2.0, 1.0)],
            vec![C64::new(0.0, 0.0), C64::new(1.0, -1.0)],
        ]);
        let one = SymSkwWeights::new(1.0, 1.0).unwrap();
        let sum = ui_norm(&sym_part(&x), NormSpec::Frobenius).unwrap()
            + ui_norm(&skw_part(&x), NormSpec::Frobenius).unwrap();
        assert_eq!(
            sym_skw_objective(&x, one, NormSpec::Frobenius).unwrap(),
            sum
        );

        assert_eq!(
            sym_skw_objective(&ComplexMatrix::zeros(3, 3), one, NormSpec::Spectral).unwrap(),
            0.0
        );
    }

    #[test]
    fn weights_validated() {
        assert!(SymSkwWeights::new(0.0, 1.0).is_err());
        assert!(SymSkwWeights::new(1.0, -0.1).is_err());
        assert!(SymSkwWeights::new(1.0, 0.0).is_ok());
    }
}
