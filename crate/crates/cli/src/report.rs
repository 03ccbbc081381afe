//! Experiment reports: canonical JSON and an aligned text table.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One checked case. `pass` is true exactly when `slack >= 0` after tolerance scaling.
#[derive(Debug, Clone, Serialize)]
pub struct CaseRecord {
    pub index: usize,
    pub suite: String,
    pub n: usize,
    pub digest: String,
    pub label: String,
    pub values: BTreeMap<String, f64>,
    /// Signed distance to failure; negative means the invariant was violated.
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: serde_json::Value,
    pub cases: Vec<CaseRecord>,
    /// Command-specific outputs such as computed factors.
    pub artifacts: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
    pub summary: Summary,
    pub pass: bool,
    /// Kept last so payloads can be compared with it stripped.
    pub wall_time_seconds: f64,
}

impl ExperimentReport {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Self {
            tool: "polarlog",
            version: VERSION,
            command: command.into(),
            config,
            cases: Vec::new(),
            artifacts: BTreeMap::new(),
            notes: Vec::new(),
            summary: Summary {
                cases: 0,
                passed: 0,
                failed: 0,
            },
            pass: true,
            wall_time_seconds: 0.0,
        }
    }

    pub fn push(&mut self, mut case: CaseRecord) {
        case.index = self.cases.len();
        self.cases.push(case);
    }

    pub fn finish(&mut self, wall_time_seconds: f64) {
        let passed = self.cases.iter().filter(|c| c.pass).count();
        self.summary = Summary {
            cases: self.cases.len(),
            passed,
            failed: self.cases.len() - passed,
        };
        self.pass = passed == self.cases.len();
        self.wall_time_seconds = wall_time_seconds;
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser =
            serde_json::Serializer::with_formatter(&mut buf, SignificantDigits::default());
        self.serialize(&mut ser)
            .expect("report serialization cannot fail");
        buf.push(b'\n');
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn table(&self) -> String {
        let header = ["#", "suite", "n", "label", "slack", "result"];
        let rows: Vec<[String; 6]> = self
            .cases
            .iter()
            .map(|c| {
                [
                    c.index.to_string(),
                    c.suite.clone(),
                    c.n.to_string(),
                    c.label.clone(),
                    format!("{:.3e}", c.slack),
                    if c.pass { "ok" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(widths)
                .enumerate()
                .map(|(i, (c, w))| {
                    if i == 3 {
                        format!("{c:<w$}")
                    } else {
                        format!("{c:>w$}")
                    }
                })
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&header.map(String::from));
        for r in &rows {
            line(r);
        }
        out.push_str(&format!(
            "{}: {} cases, {} passed, {} failed\n",
            self.command, self.summary.cases, self.summary.passed, self.summary.failed
        ));
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

/// Pretty JSON with every float written as `d.dddddddddddddddde±x` (17 significant digits).
#[derive(Default)]
pub struct SignificantDigits {
    inner: PrettyFormatter<'static>,
}

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentReport {
        let mut r = ExperimentReport::new("logmin", serde_json::json!({"seed": 7, "tol": 1e-9}));
        r.push(CaseRecord {
            index: 99,
            suite: "search".into(),
            n: 2,
            digest: "abc".into(),
            label: "fro/full".into(),
            values: BTreeMap::from([("baseline".into(), 0.1), ("best".into(), f64::INFINITY)]),
            slack: 0.5,
            pass: true,
        });
        r.finish(1.25);
        r
    }

    #[test]
    fn floats_have_seventeen_digits() {
        let json = sample().to_json();
        assert!(json.contains("1.0000000000000001e-1"), "{json}");
        assert!(json.contains("\"best\": null"));
        assert!(json.contains("\"tol\": 1.0000000000000001e-9"));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["cases"][0]["index"], 0);
        assert_eq!(v["summary"]["passed"], 1);
    }

    #[test]
    fn wall_time_is_the_last_key() {
        let json = sample().to_json();
        let tail = json.trim_end().trim_end_matches('}').trim_end();
        assert!(tail
            .rsplit('\n')
            .next()
            .unwrap()
            .trim_start()
            .starts_with("\"wall_time_seconds\""));
    }

    #[test]
    fn table_lists_every_case() {
        let t = sample().table();
        assert!(t.contains("fro/full"));
        assert!(t.contains("1 cases, 1 passed, 0 failed"));
    }
}
