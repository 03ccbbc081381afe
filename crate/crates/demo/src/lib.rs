//! Browser bindings for three interactive views: the objective landscape on a
//! two-parameter slice of U(2), the Ky Fan minimizer family for a phase block,
//! and the log-majorization witness for a random unitary.
//!
//! The `*_json` functions hold the logic and are plain Rust so they can be tested
//! natively; the `#[wasm_bindgen]` wrappers only convert errors.

use polarlog::densekit::{random_unitary, C64};
use polarlog::majorize::log_majorization_witness;
use polarlog::norms::{NormSpec, SymSkwWeights};
use polarlog::optimize::{chart_point, kyfan_minimizer_family, kyfan_profile, Mode, Objective};
use polarlog::ComplexMatrix;
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_RESOLUTION: usize = 200;

fn mode_from(name: &str, mu: f64, mu_c: f64) -> Result<Mode, String> {
    match name {
        "full" => Ok(Mode::FullLog),
        "sym" => Ok(Mode::SymLog),
        "family" => SymSkwWeights::new(mu, mu_c)
            .map(Mode::Family)
            .map_err(|e| e.to_string()),
        other => Err(format!(
            "unknown mode '{other}' (expected full, sym or family)"
        )),
    }
}

/// `Z = R(θ)·diag(σ₁, σ₂)` with `R(θ)` a plane rotation.
fn two_by_two(sigma1: f64, sigma2: f64, theta: f64) -> Result<ComplexMatrix, String> {
    if !(sigma1 > 0.0 && sigma2 > 0.0 && sigma1.is_finite() && sigma2.is_finite()) {
        return Err("singular values must be positive".into());
    }
    let (s, c) = theta.sin_cos();
    Ok(ComplexMatrix::from_real(
        2,
        2,
        &[c * sigma1, -s * sigma2, s * sigma1, c * sigma2],
    ))
}

/// Objective values on the chart slice `Q(a, b) = U_p·exp(a·B₁ + b·B₂)` for
/// `a, b ∈ [-extent, extent]`, with `B₁` a real rotation generator and `B₂` its
/// imaginary symmetric counterpart. Branch-cut points come back as `null`.
#[allow(clippy::too_many_arguments)]
pub fn landscape_json(
    sigma1: f64,
    sigma2: f64,
    theta: f64,
    norm: &str,
    mode: &str,
    mu: f64,
    mu_c: f64,
    extent: f64,
    resolution: usize,
) -> Result<String, String> {
    if !(2..=MAX_RESOLUTION).contains(&resolution) {
        return Err(format!("resolution must be in 2..={MAX_RESOLUTION}"));
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err("extent must be positive".into());
    }
    let spec: NormSpec = norm
        .parse()
        .map_err(|e: polarlog::LinalgError| e.to_string())?;
    let z = two_by_two(sigma1, sigma2, theta)?;
    let obj = Objective::new(z, spec, mode_from(mode, mu, mu_c)?).map_err(|e| e.to_string())?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let b1 = ComplexMatrix::from_real(2, 2, &[0.0, r, -r, 0.0]);
    let b2 = ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(0.0, r)],
        vec![C64::new(0.0, r), C64::new(0.0, 0.0)],
    ]);
    let step = 2.0 * extent / (resolution - 1) as f64;
    let mut grid = Vec::with_capacity(resolution);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..resolution {
        let b = -extent + i as f64 * step;
        let mut row = Vec::with_capacity(resolution);
        for j in 0..resolution {
            let a = -extent + j as f64 * step;
            let s = &b1.scale_real(a) + &b2.scale_real(b);
            let q = chart_point(obj.u_p(), &s).map_err(|e| e.to_string())?;
            let v = obj.evaluate(&q).map_err(|e| e.to_string())?.value();
            if let Some(v) = v {
                if v < best.0 {
                    best = (v, a, b);
                }
            }
            row.push(v);
        }
        grid.push(row);
    }
    Ok(json!({
        "baseline": obj.baseline(),
        "extent": extent,
        "resolution": resolution,
        "grid": grid,
        "min": { "value": best.0, "a": best.1, "b": best.2 },
    })
    .to_string())
}

/// The `k = 1` family for `Z = diag(σ₁, σ₂)` with block `Q₂₂ = e^{iφ}`.
pub fn kyfan_family_json(sigma1: f64, sigma2: f64, phi: f64) -> Result<String, String> {
    let z = two_by_two(sigma1, sigma2, 0.0)?;
    let q22 = ComplexMatrix::from_diag(&[C64::from_polar(1.0, phi)]);
    let m = kyfan_minimizer_family(&z, 1, &q22).map_err(|e| e.to_string())?;
    let profile = kyfan_profile(&z, &m.q_hat).map_err(|e| e.to_string())?;
    let sorted = {
        let mut l = [sigma1.ln().abs(), sigma2.ln().abs()];
        l.sort_by(|a, b| b.total_cmp(a));
        l
    };
    Ok(json!({
        "admissible": m.admissible,
        "condition_lhs": m.condition_lhs,
        "condition_rhs": m.condition_rhs,
        "kyfan1": m.value_k,
        "kyfan1_min": m.target,
        "kyfan2": profile.as_ref().map(|p| p[1]),
        "kyfan2_min": sorted[0] + sorted[1],
    })
    .to_string())
}

/// Log-majorization witness for `d` (comma-separated, positive) and a seeded unitary.
pub fn majorization_json(d: &str, seed: u64) -> Result<String, String> {
    let mut v: Vec<f64> = d
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("cannot parse '{}'", t.trim()))
        })
        .collect::<Result<_, _>>()?;
    if v.is_empty() || v.len() > 6 {
        return Err("give between 1 and 6 values".into());
    }
    v.sort_by(|a, b| b.total_cmp(a));
    let q = random_unitary(v.len(), seed);
    let w = log_majorization_witness(&q, &v).map_err(|e| e.to_string())?;
    let mut x = w.x.clone();
    x.sort_by(|a, b| b.total_cmp(a));
    Ok(json!({
        "d": v,
        "x": x,
        "prefix_log_d": w.verdict.prefix_sums_x,
        "prefix_log_x": w.verdict.prefix_sums_y,
        "majorized": w.verdict.strong,
        "min_slack": w.verdict.min_slack,
        "det_rel_error": w.det_rel_error,
    })
    .to_string())
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn landscape(
    sigma1: f64,
    sigma2: f64,
    theta: f64,
    norm: &str,
    mode: &str,
    mu: f64,
    mu_c: f64,
    extent: f64,
    resolution: usize,
) -> Result<String, JsValue> {
    landscape_json(
        sigma1, sigma2, theta, norm, mode, mu, mu_c, extent, resolution,
    )
    .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn kyfan_family(sigma1: f64, sigma2: f64, phi: f64) -> Result<String, JsValue> {
    kyfan_family_json(sigma1, sigma2, phi).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn majorization(d: &str, seed: u64) -> Result<String, JsValue> {
    majorization_json(d, seed).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn landscape_minimum_at_origin() {
        let out: Value = serde_json::from_str(
            &landscape_json(3.0, 0.5, 0.4, "fro", "full", 1.0, 0.0, 1.0, 21).unwrap(),
        )
        .unwrap();
        let base = out["baseline"].as_f64().unwrap();
        assert!((base - (3f64.ln().powi(2) + 0.5f64.ln().powi(2)).sqrt()).abs() < 1e-12);
        assert!((out["min"]["value"].as_f64().unwrap() - base).abs() < 1e-10);
        assert!(out["min"]["a"].as_f64().unwrap().abs() < 1e-12);
        assert_eq!(out["grid"].as_array().unwrap().len(), 21);
    }

    #[test]
    fn landscape_rejects_bad_input() {
        assert!(landscape_json(1.0, 0.0, 0.0, "fro", "full", 1.0, 0.0, 1.0, 10).is_err());
        assert!(landscape_json(1.0, 2.0, 0.0, "nuclear", "full", 1.0, 0.0, 1.0, 10).is_err());
        assert!(landscape_json(1.0, 2.0, 0.0, "fro", "both", 1.0, 0.0, 1.0, 10).is_err());
        assert!(landscape_json(1.0, 2.0, 0.0, "fro", "full", 1.0, 0.0, 1.0, 1000).is_err());
    }

    #[test]
    fn family_phase_slider() {
        let ok: Value = serde_json::from_str(&kyfan_family_json(4.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(ok["admissible"], true);
        assert!((ok["kyfan1"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-12);
        assert!((ok["kyfan2"].as_f64().unwrap() - (4f64.ln() + 1.0)).abs() < 1e-12);
        let bad: Value = serde_json::from_str(&kyfan_family_json(4.0, 1.0, 3.0).unwrap()).unwrap();
        assert_eq!(bad["admissible"], false);
        assert!((bad["kyfan1"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn witness_majorizes() {
        let out: Value =
            serde_json::from_str(&majorization_json("0.5, 3, 1.2", 4).unwrap()).unwrap();
        assert_eq!(out["majorized"], true);
        assert!(out["det_rel_error"].as_f64().unwrap() < 1e-10);
        assert!(majorization_json("1, -2", 0).is_err());
        assert!(majorization_json("1, x", 0).is_err());
    }
}
