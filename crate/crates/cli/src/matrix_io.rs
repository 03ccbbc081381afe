//! Matrix files.
//!
//! JSON: `{"rows": m, "cols": n, "data": [[re, im], ...]}`, row-major.
//! CSV: one matrix row per line, entries such as `1.5`, `-2i`, `3e-2+4.5i`.

use std::fmt;
use std::path::Path;

use polarlog::{ComplexMatrix, C64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug)]
pub struct ParseError {
    pub path: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.path {
            write!(f, "{p}: ")?;
        }
        if let Some(l) = self.line {
            write!(f, "line {l}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: Option<usize>, message: impl Into<String>) -> ParseError {
    ParseError {
        path: None,
        line,
        message: message.into(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

pub fn parse_json(text: &str) -> Result<ComplexMatrix, ParseError> {
    let f: MatrixFile =
        serde_json::from_str(text).map_err(|e| err(Some(e.line()), e.to_string()))?;
    if f.rows == 0 || f.cols == 0 {
        return Err(err(
            None,
            "matrix must have at least one row and one column",
        ));
    }
    if f.data.len() != f.rows * f.cols {
        return Err(err(
            None,
            format!(
                "expected {} entries for {}x{}, found {}",
                f.rows * f.cols,
                f.rows,
                f.cols,
                f.data.len()
            ),
        ));
    }
    let data: Vec<C64> = f.data.iter().map(|[re, im]| C64::new(*re, *im)).collect();
    ComplexMatrix::from_vec(f.rows, f.cols, data).map_err(|e| err(None, e.to_string()))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (scientific notation allowed).
pub fn parse_entry(s: &str) -> Option<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let z: C64 = t.parse().ok()?;
    (z.re.is_finite() && z.im.is_finite()).then_some(z)
}

pub fn parse_csv(text: &str) -> Result<ComplexMatrix, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| err(e.position().map(|p| p.line() as usize), e.to_string()))?;
        let line = record.position().map(|p| p.line() as usize);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let mut row = Vec::with_capacity(record.len());
        for (j, field) in record.iter().enumerate() {
            let z = parse_entry(field).ok_or_else(|| {
                err(
                    line,
                    format!(
                        "column {}: cannot parse '{field}' as a complex number",
                        j + 1
                    ),
                )
            })?;
            row.push(z);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(err(
                    line,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(err(None, "no matrix rows found"));
    }
    Ok(ComplexMatrix::from_rows(&rows))
}

/// Reads a matrix, choosing the format from the extension (`.json`, otherwise CSV).
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, ParseError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| err(None, format!("{}: {e}", path.display())))?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let parsed = if is_json {
        parse_json(&text)
    } else {
        parse_csv(&text)
    };
    parsed.map_err(|e| ParseError {
        path: Some(path.display().to_string()),
        ..e
    })
}

/// Short content digest: SHA-256 over the dimensions and little-endian entries.
pub fn digest(m: &ComplexMatrix) -> String {
    let mut h = Sha256::new();
    h.update((m.rows() as u64).to_le_bytes());
    h.update((m.cols() as u64).to_le_bytes());
    for z in m.data() {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    let full = format!("{:x}", h.finalize());
    full[..16].to_string()
}
