//! End-to-end runs of the binary: exit codes, input formats and report shape.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polarlog"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polarlog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn polar_on_csv_column() {
    let input = scratch("col.csv", "# column\n1\n1\n");
    let out = scratch("col.out.json", "");
    let o = run(&[
        "polar",
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["command"], "polar");
    assert_eq!(v["pass"], true);
    let h = v["artifacts"]["hermitian"]["data"][0][0].as_f64().unwrap();
    assert!((h - 2f64.sqrt()).abs() < 1e-14);
    let u = v["artifacts"]["unitary"]["data"][1][0].as_f64().unwrap();
    assert!((u - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
}

#[test]
fn polar_on_json_input() {
    let input = scratch(
        "m.json",
        r#"{"rows": 2, "cols": 2, "data": [[2, 0], [0, 1], [0, 0], [3, 0]]}"#,
    );
    let o = run(&["polar", "--in", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("3 cases, 3 passed, 0 failed"));
}

#[test]
fn singular_input_exits_two() {
    let input = scratch("sing.csv", "1,2\n2,4\n");
    let o = run(&["polar", "--in", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rank deficient"), "{}", stderr(&o));
}

#[test]
fn parse_errors_name_the_line() {
    let input = scratch("bad.csv", "1,2\n3,x\n");
    let o = run(&["polar", "--in", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2: column 2"), "{}", stderr(&o));
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(run(&["logmin", "--norm", "nuclear"]).status.code(), Some(2));
    assert_eq!(run(&["logmin", "--dims", "4..2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn small_runs_pass() {
    for args in [
        &[
            "logmin", "--dims", "2..3", "--cases", "2", "--trials", "50", "--mode", "family",
            "--mu", "2", "--muc", "0.5",
        ][..],
        &["cohen", "--dims", "3", "--cases", "3", "--normal"],
        &[
            "kyfan", "--dims", "2..3", "--cases", "2", "--q22", "identity",
        ],
        &["kyfan", "--rectangular"],
    ] {
        let o = run(args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stdout)
        );
    }
}

#[test]
fn rectangular_note_reports_ln_sqrt_2() {
    let o = run(&["kyfan", "--rectangular"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("ln sqrt 2 = 0.3465735902799"), "{text}");
}
