//! The demo views agree with the core library.

use polarlog::norms::NormSpec;
use polarlog::optimize::{Mode, Objective};
use polarlog::ComplexMatrix;
use polarlog_demo::{kyfan_family_json, landscape_json, majorization_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn landscape_never_beats_the_baseline() {
    for norm in ["fro", "spec", "kyfan:1", "schatten:1.5"] {
        for mode in ["full", "sym", "family"] {
            let out = parse(landscape_json(2.5, 0.3, 1.1, norm, mode, 1.0, 0.5, 2.0, 31).unwrap());
            let base = out["baseline"].as_f64().unwrap();
            for v in out["grid"]
                .as_array()
                .unwrap()
                .iter()
                .flat_map(|r| r.as_array().unwrap())
            {
                if let Some(v) = v.as_f64() {
                    assert!(
                        v >= base - 1e-9 * (1.0 + base),
                        "{norm}/{mode}: {v} < {base}"
                    );
                }
            }
        }
    }
}

#[test]
fn landscape_baseline_matches_objective() {
    let out = parse(landscape_json(2.0, 0.5, 0.0, "spec", "full", 1.0, 0.0, 1.0, 5).unwrap());
    let z = ComplexMatrix::from_real_diag(&[2.0, 0.5]);
    let obj = Objective::new(z, NormSpec::Spectral, Mode::FullLog).unwrap();
    assert!((out["baseline"].as_f64().unwrap() - obj.baseline()).abs() < 1e-14);
}

#[test]
fn family_turns_inadmissible_past_the_threshold() {
    let at = |phi: f64| {
        parse(kyfan_family_json(4.0, 1.0, phi).unwrap())["admissible"]
            .as_bool()
            .unwrap()
    };
    assert!(at(1.3));
    assert!(!at(1.45));
}

#[test]
fn witness_is_sorted_and_preserves_the_product() {
    let out = parse(majorization_json("1, 5, 0.2, 2", 9).unwrap());
    let x: Vec<f64> = out["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!(x.windows(2).all(|w| w[0] >= w[1]));
    assert!((x.iter().product::<f64>() - 2.0).abs() < 1e-10);
}
