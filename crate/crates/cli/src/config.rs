//! Command-line configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polarlog::norms::NormSpec;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0x5EED_1091;

#[derive(Debug, Parser)]
#[command(
    name = "polarlog",
    version,
    about = "Numerical checks of log-polar minimization and its supporting inequalities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polar decomposition of a matrix read from a file.
    Polar(PolarArgs),
    /// Searches for unitaries beating the polar factor on ‖log(Q*Z)‖.
    Logmin(LogminArgs),
    /// Partial compound trace inequalities and their majorization consequences.
    Cohen(CohenArgs),
    /// Ky Fan minimizer families, the uniqueness probe and the rectangular example.
    Kyfan(KyfanArgs),
}

/// Inclusive dimension range written `LO..HI` (or a single `N`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimRange {
    pub lo: usize,
    pub hi: usize,
}

impl DimRange {
    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl FromStr for DimRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid dimension '{t}'"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!("dimension range '{s}' must satisfy 1 <= LO <= HI"));
        }
        Ok(Self { lo, hi })
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Master seed; every random draw derives from it.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Comparison tolerance, applied relative to `1 + |reference|`.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the JSON report here.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PolarArgs {
    /// Matrix file (`.json`, otherwise CSV).
    #[arg(long = "in")]
    #[serde(skip)]
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Full,
    Sym,
    Family,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LogminArgs {
    /// Objective(s); repeat the flag for several. Defaults to full and sym.
    #[arg(long = "mode", value_enum)]
    pub modes: Vec<ModeArg>,
    /// Hermitian-part weight for `--mode family`.
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Skew-Hermitian-part weight for `--mode family`.
    #[arg(long, default_value_t = 1.0)]
    pub muc: f64,
    #[arg(long, default_value = "2..4")]
    pub dims: DimRange,
    /// Haar samples per matrix.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Random matrices per dimension.
    #[arg(long, default_value_t = 5)]
    pub cases: usize,
    /// Natural log of the largest condition number of generated matrices.
    #[arg(long, default_value_t = 8.0)]
    pub log_cond: f64,
    /// Norm(s) to test: fro, spec, kyfan:<k>, schatten:<p>. Defaults to the full grid.
    #[arg(long = "norm", value_parser = parse_norm)]
    #[serde(serialize_with = "ser_norms")]
    pub norms: Vec<NormSpec>,
    /// Descent iterations from a small perturbation of the polar factor (0 disables).
    #[arg(long, default_value_t = 60)]
    pub descent_steps: usize,
    /// Use the matrix in this file instead of random ones.
    #[arg(long = "in")]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CohenArgs {
    /// Use normal matrices `U·diag(λ)·U*`, for which the inequalities are equalities.
    #[arg(long)]
    pub normal: bool,
    #[arg(long, default_value = "1..4")]
    pub dims: DimRange,
    #[arg(long, default_value_t = 10)]
    pub cases: usize,
    /// Use the matrix in this file instead of random ones.
    #[arg(long = "in")]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Q22Arg {
    /// `Q₂₂ = I`, which reproduces the polar factor.
    Identity,
    /// A random admissible `Q₂₂ = exp(tS)`.
    Random,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KyfanArgs {
    #[arg(long, value_enum, default_value_t = Q22Arg::Random)]
    pub q22: Q22Arg,
    /// Run only the rectangular `Z = [1; 1]` example.
    #[arg(long)]
    pub rectangular: bool,
    #[arg(long, default_value = "2..4")]
    pub dims: DimRange,
    #[arg(long, default_value_t = 4)]
    pub cases: usize,
    #[arg(long, default_value_t = 3.0)]
    pub log_cond: f64,
    /// Use the matrix in this file instead of random ones.
    #[arg(long = "in")]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

fn parse_norm(s: &str) -> Result<NormSpec, String> {
    s.parse().map_err(|e: polarlog::LinalgError| e.to_string())
}

fn ser_norms<S: serde::Serializer>(norms: &[NormSpec], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(norms.iter().map(|n| n.to_string()))
}
