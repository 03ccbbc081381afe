use crate::densekit::{
    hermitian_eig, polar_from_svd, svd, ComplexMatrix, DecompConfig, PolarFactors, C64,
};
use crate::error::{LinalgError, Result};
use crate::matfun::{logm_principal, skw_part, sym_part};
use crate::norms::{singular_values, NormSpec, SymSkwWeights};

/// Unitarity tolerance for candidate `Q` matrices.
pub const UNITARY_TOL: f64 = 1e-8;

/// Which functional of the logarithm is being minimized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// `‖log(Q*Z)‖`
    FullLog,
    /// `‖sym log(Q*Z)‖`
    SymLog,
    /// `μ‖sym log(Q*Z)‖ + μ_c‖skw log(Q*Z)‖`
    Family(SymSkwWeights),
}

impl Mode {
    pub fn label(&self) -> String {
        match self {
            Mode::FullLog => "full".into(),
            Mode::SymLog => "sym".into(),
            Mode::Family(w) => format!("family(mu={},mu_c={})", w.mu(), w.mu_c()),
        }
    }
}

/// Result of evaluating an objective at one unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation {
    Value(f64),
    /// `Q*Z` has an eigenvalue on the branch cut of the principal logarithm.
    BranchCut,
}

impl Evaluation {
    pub fn value(self) -> Option<f64> {
        match self {
            Evaluation::Value(v) => Some(v),
            Evaluation::BranchCut => None,
        }
    }

    /// The value, with branch-cut points mapped to `+∞`.
    pub fn or_infinity(self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }
}

/// Singular values of `log(Q*Z)` and of its Hermitian and skew-Hermitian parts,
/// each sorted descending. Every objective in [`Mode`] is a gauge of these.
#[derive(Debug, Clone)]
pub struct LogSpectra {
    pub full: Vec<f64>,
    pub sym: Vec<f64>,
    pub skw: Option<Vec<f64>>,
}

fn abs_sorted(mut v: Vec<f64>) -> Vec<f64> {
    for x in v.iter_mut() {
        *x = x.abs();
    }
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

impl LogSpectra {
    /// Spectra of `log(q*·z)`; `None` on the branch cut.
    pub fn of(z: &ComplexMatrix, q: &ComplexMatrix, with_skw: bool) -> Result<Option<Self>> {
        let l = match logm_principal(&q.adjoint_mul(z)) {
            Ok(l) => l,
            Err(LinalgError::BranchCut { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        Ok(Some(Self::of_log(&l, with_skw)?))
    }

    pub fn of_log(l: &ComplexMatrix, with_skw: bool) -> Result<Self> {
        let full = singular_values(l);
        let sym = abs_sorted(hermitian_eig(&sym_part(l))?.1);
        let skw = if with_skw {
            // skw = i·K with K Hermitian
            let k = skw_part(l).scale(C64::new(0.0, -1.0));
            Some(abs_sorted(hermitian_eig(&k)?.1))
        } else {
            None
        };
        Ok(Self { full, sym, skw })
    }

    pub fn value(&self, spec: NormSpec, mode: Mode) -> f64 {
        match mode {
            Mode::FullLog => spec.gauge_sorted(&self.full),
            Mode::SymLog => spec.gauge_sorted(&self.sym),
            Mode::Family(w) => {
                let skw = self
                    .skw
                    .as_ref()
                    .expect("skew spectrum not computed for a family objective");
                w.mu() * spec.gauge_sorted(&self.sym) + w.mu_c() * spec.gauge_sorted(skw)
            }
        }
    }
}

/// A fixed square nonsingular `Z`, a norm, and a mode.
#[derive(Debug, Clone)]
pub struct Objective {
    z: ComplexMatrix,
    spec: NormSpec,
    mode: Mode,
    polar: PolarFactors,
    /// `|log σ_i(Z)|` sorted descending: the singular values of `log H`.
    log_h_spectrum: Vec<f64>,
}

impl Objective {
    pub fn new(z: ComplexMatrix, spec: NormSpec, mode: Mode) -> Result<Self> {
        if !z.is_square() {
            return Err(LinalgError::Dimension(
                "objective requires a square Z".into(),
            ));
        }
        spec.validate(z.rows())?;
        let f = svd(&z)?;
        let polar = polar_from_svd(&f, &DecompConfig::default())?;
        let log_h_spectrum = abs_sorted(f.sigma.iter().map(|s| s.ln()).collect());
        Ok(Self {
            z,
            spec,
            mode,
            polar,
            log_h_spectrum,
        })
    }

    pub fn with_spec(&self, spec: NormSpec) -> Result<Self> {
        spec.validate(self.dim())?;
        Ok(Self {
            spec,
            ..self.clone()
        })
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        Self {
            mode,
            ..self.clone()
        }
    }

    pub fn z(&self) -> &ComplexMatrix {
        &self.z
    }

    pub fn spec(&self) -> NormSpec {
        self.spec
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.z.rows()
    }

    pub fn polar(&self) -> &PolarFactors {
        &self.polar
    }

    pub fn u_p(&self) -> &ComplexMatrix {
        &self.polar.unitary
    }

    /// Singular values of `log H`, descending.
    pub fn log_h_spectrum(&self) -> &[f64] {
        &self.log_h_spectrum
    }

    /// `‖log H‖` in the given norm.
    pub fn log_h_norm(&self, spec: NormSpec) -> f64 {
        spec.gauge_sorted(&self.log_h_spectrum)
    }

    /// The predicted minimum: `‖log H‖`, scaled by `μ` in family mode.
    pub fn baseline(&self) -> f64 {
        baseline_for(&self.log_h_spectrum, self.spec, self.mode)
    }

    pub fn evaluate(&self, q: &ComplexMatrix) -> Result<Evaluation> {
        if q.rows() != self.dim() || !q.is_square() {
            return Err(LinalgError::Dimension(
                "Q must match the dimension of Z".into(),
            ));
        }
        let dev = q.unitarity_residual();
        if dev > UNITARY_TOL {
            return Err(LinalgError::NotUnitary { deviation: dev });
        }
        self.evaluate_unchecked(q)
    }

    pub(crate) fn evaluate_unchecked(&self, q: &ComplexMatrix) -> Result<Evaluation> {
        let with_skw = matches!(self.mode, Mode::Family(_));
        Ok(match LogSpectra::of(&self.z, q, with_skw)? {
            Some(s) => Evaluation::Value(s.value(self.spec, self.mode)),
            None => Evaluation::BranchCut,
        })
    }
}

pub(crate) fn baseline_for(log_h_spectrum: &[f64], spec: NormSpec, mode: Mode) -> f64 {
    let b = spec.gauge_sorted(log_h_spectrum);
    match mode {
        Mode::Family(w) => w.mu() * b,
        _ => b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densekit::{random_nonsingular, random_unitary};
    use crate::matfun::logm_hermitian_pd;
    use crate::norms::ui_norm;

    #[test]
    fn value_at_polar_factor_is_log_h_norm() {
        let z = random_nonsingular(4, 3.0, 21);
        for spec in crate::norms::norm_grid(4) {
            let obj = Objective::new(z.clone(), spec, Mode::FullLog).unwrap();
            let at_up = obj.evaluate(obj.u_p()).unwrap().value().unwrap();
            let log_h = ui_norm(&logm_hermitian_pd(&obj.polar().hermitian).unwrap(), spec).unwrap();
            assert!(
                (at_up - log_h).abs() < 1e-11 * (1.0 + log_h),
                "{spec}: {at_up} vs {log_h}"
            );
            assert!((obj.baseline() - log_h).abs() < 1e-11 * (1.0 + log_h));
        }
    }

    #[test]
    fn unitary_z_at_itself_is_zero() {
        let z = random_unitary(3, 8);
        let obj = Objective::new(z.clone(), NormSpec::Frobenius, Mode::FullLog).unwrap();
        assert!(obj.evaluate(&z).unwrap().value().unwrap() < 1e-13);
        assert!(obj.baseline() < 1e-13);
    }

    #[test]
    fn scalar_case_minimized_at_argument() {
        // z = r e^{iφ}: |Log(e^{-iθ} z)|² = (ln r)² + (φ - θ)² for |φ - θ| < π
        let (r, phi) = (2.5f64, 1.2f64);
        let z = ComplexMatrix::from_diag(&[C64::from_polar(r, phi)]);
        let obj = Objective::new(z, NormSpec::Frobenius, Mode::FullLog).unwrap();
        for theta in [-1.5, -0.5, 0.0, 0.7, 1.2, 2.0, 3.0] {
            let q = ComplexMatrix::from_diag(&[C64::from_polar(1.0, theta)]);
            let v = obj.evaluate(&q).unwrap().value().unwrap();
            let want = (r.ln().powi(2) + (phi - theta).powi(2)).sqrt();
            assert!((v - want).abs() < 1e-13);
            assert!(v >= r.ln() - 1e-15);
        }
        assert!((obj.baseline() - r.ln()).abs() < 1e-15);
    }

    #[test]
    fn branch_cut_marker_and_validation() {
        let z = ComplexMatrix::from_real_diag(&[2.0, 1.0]);
        let obj = Objective::new(z, NormSpec::Frobenius, Mode::FullLog).unwrap();
        let flip = ComplexMatrix::from_real_diag(&[-1.0, 1.0]);
        assert_eq!(obj.evaluate(&flip).unwrap(), Evaluation::BranchCut);
        let not_unitary = ComplexMatrix::from_real_diag(&[2.0, 1.0]);
        assert!(matches!(
            obj.evaluate(&not_unitary),
            Err(LinalgError::NotUnitary { .. })
        ));
        let singular = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            Objective::new(singular, NormSpec::Frobenius, Mode::FullLog),
            Err(LinalgError::RankDeficient { .. })
        ));
    }

    #[test]
    fn family_baseline_scales_with_mu() {
        let z = random_nonsingular(3, 2.0, 2);
        let w = SymSkwWeights::new(2.0, 0.5).unwrap();
        let obj = Objective::new(z, NormSpec::Spectral, Mode::Family(w)).unwrap();
        let plain = obj.log_h_norm(NormSpec::Spectral);
        assert!((obj.baseline() - 2.0 * plain).abs() < 1e-14);
        let at_up = obj.evaluate(obj.u_p()).unwrap().value().unwrap();
        assert!((at_up - 2.0 * plain).abs() < 1e-10);
    }
}
