//! The experiment commands. Each returns a report whose payload depends only on
//! the configuration (the wall time is filled in by [`run`]).

use std::fmt;
use std::time::Instant;

use polarlog::densekit::{
    complex_gaussian, haar_unitary, nonsingular_with, polar, rng_for, singular_values, PolarFactors,
};
use polarlog::majorize::{
    cohen_check, cohen_symmetric_chain, log_majorization_witness_tol, ssli_check, MAX_COMPOUND_DIM,
};
use polarlog::matfun::skw_part;
use polarlog::norms::{norm_grid, NormSpec, SymSkwWeights};
use polarlog::optimize::{
    chart_gradient, kyfan_minimizer_family, local_descent, random_search_grid,
    rectangular_counterexample_check, sample_admissible_member, skew_basis, skew_from_coords,
    uniqueness_probe, Mode, Objective, FD_STEP, MIN_LOG_SEPARATION,
};
use polarlog::{ComplexMatrix, LinalgError, C64};
use rand::Rng;

use crate::config::{CohenArgs, Command, KyfanArgs, LogminArgs, ModeArg, PolarArgs, Q22Arg};
use crate::matrix_io::{digest, read_matrix, MatrixFile};
use crate::report::{CaseRecord, ExperimentReport};

/// A failure that prevents a report from being produced (exit status 2).
#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError(e.to_string())
    }
}

type CmdResult = Result<ExperimentReport, CliError>;

pub fn run(cmd: &Command) -> CmdResult {
    let start = Instant::now();
    let mut report = match cmd {
        Command::Polar(a) => cmd_polar(a)?,
        Command::Logmin(a) => cmd_logmin(a)?,
        Command::Cohen(a) => cmd_cohen(a)?,
        Command::Kyfan(a) => cmd_kyfan(a)?,
    };
    report.finish(start.elapsed().as_secs_f64());
    Ok(report)
}

fn config_json<T: serde::Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("configuration is serializable")
}

/// Stream identifier for case `case` at dimension `n`.
fn stream(n: usize, case: usize) -> u64 {
    ((n as u64) << 32) | case as u64
}

/// Seed for the search attached to one case, decorrelated from the matrix stream.
fn case_seed(seed: u64, n: usize, case: usize) -> u64 {
    seed ^ stream(n, case)
        .wrapping_add(1)
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn rel_tol(tol: f64, reference: f64) -> f64 {
    tol * (1.0 + reference.abs())
}

fn case(
    suite: &str,
    n: usize,
    z: &ComplexMatrix,
    label: String,
    values: Vec<(&str, f64)>,
    slack: f64,
) -> CaseRecord {
    CaseRecord {
        index: 0,
        suite: suite.into(),
        n,
        digest: digest(z),
        label,
        values: values
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        slack,
        pass: slack >= 0.0,
    }
}

fn square_input(path: &std::path::Path) -> Result<ComplexMatrix, CliError> {
    let z = read_matrix(path).map_err(|e| CliError(e.to_string()))?;
    if !z.is_square() {
        return Err(CliError(format!(
            "{}: expected a square matrix, got {}x{}",
            path.display(),
            z.rows(),
            z.cols()
        )));
    }
    Ok(z)
}

fn matrix_json(m: &ComplexMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixFile::from(m)).expect("matrix is serializable")
}

pub fn cmd_polar(args: &PolarArgs) -> CmdResult {
    let z = read_matrix(&args.input).map_err(|e| CliError(e.to_string()))?;
    if z.rows() < z.cols() {
        return Err(CliError(format!(
            "polar factor needs rows >= cols, got {}x{}",
            z.rows(),
            z.cols()
        )));
    }
    let PolarFactors { unitary, hermitian } = polar(&z).map_err(|e| match e {
        LinalgError::RankDeficient {
            sigma_min,
            threshold,
        } => CliError(format!(
            "{}: matrix is rank deficient (sigma_min = {sigma_min:e}, threshold {threshold:e})",
            args.input.display()
        )),
        e => e.into(),
    })?;
    let mut report = ExperimentReport::new("polar", config_json(args));
    let n = z.cols();
    let tol = args.common.tol;
    let recon = unitary.matmul(&hermitian).rel_dist(&z);
    let orth = unitary.unitarity_residual();
    let herm = hermitian.hermitian_deviation();
    report.push(case(
        "polar",
        n,
        &z,
        "reconstruction".into(),
        vec![("relative_residual", recon)],
        rel_tol(tol, 0.0) - recon,
    ));
    report.push(case(
        "polar",
        n,
        &z,
        "orthonormal columns".into(),
        vec![("residual", orth)],
        rel_tol(tol, 0.0) - orth,
    ));
    report.push(case(
        "polar",
        n,
        &z,
        "hermitian factor".into(),
        vec![("deviation", herm)],
        rel_tol(tol, 0.0) - herm,
    ));
    let sigma = singular_values(&z)?;
    report
        .artifacts
        .insert("unitary".into(), matrix_json(&unitary));
    report
        .artifacts
        .insert("hermitian".into(), matrix_json(&hermitian));
    report
        .artifacts
        .insert("singular_values".into(), serde_json::json!(sigma));
    Ok(report)
}

fn modes_for(args: &LogminArgs) -> Result<Vec<(ModeArg, Mode)>, CliError> {
    let requested = if args.modes.is_empty() {
        vec![ModeArg::Full, ModeArg::Sym]
    } else {
        args.modes.clone()
    };
    let mut out = Vec::new();
    for m in requested {
        if out.iter().any(|(a, _)| *a == m) {
            continue;
        }
        let mode = match m {
            ModeArg::Full => Mode::FullLog,
            ModeArg::Sym => Mode::SymLog,
            ModeArg::Family => Mode::Family(SymSkwWeights::new(args.mu, args.muc)?),
        };
        out.push((m, mode));
    }
    Ok(out)
}

fn random_skew<R: Rng>(n: usize, norm: f64, rng: &mut R) -> ComplexMatrix {
    let c: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let s = skew_from_coords(&skew_basis(n), &c);
    s.scale_real(norm / s.frobenius_norm())
}

pub fn cmd_logmin(args: &LogminArgs) -> CmdResult {
    if args.trials == 0 {
        return Err(CliError("--trials must be at least 1".into()));
    }
    if !(args.log_cond >= 0.0 && args.log_cond.is_finite()) {
        return Err(CliError("--log-cond must be a nonnegative number".into()));
    }
    let modes = modes_for(args)?;
    let seed = args.common.seed;
    let tol = args.common.tol;
    let mut inputs: Vec<(usize, usize, ComplexMatrix)> = Vec::new();
    if let Some(path) = &args.input {
        let z = square_input(path)?;
        inputs.push((z.rows(), 0, z));
    } else {
        for n in args.dims.iter() {
            for c in 0..args.cases {
                inputs.push((
                    n,
                    c,
                    nonsingular_with(n, args.log_cond, &mut rng_for(seed, stream(n, c))),
                ));
            }
        }
    }
    for spec in &args.norms {
        if let NormSpec::KyFan(k) = spec {
            if inputs.iter().all(|(n, _, _)| k > n) {
                return Err(CliError(format!("{spec} exceeds every tested dimension")));
            }
        }
    }

    let mut report = ExperimentReport::new("logmin", config_json(args));
    let mode_list: Vec<Mode> = modes.iter().map(|(_, m)| *m).collect();
    for (n, c, z) in &inputs {
        let (n, c) = (*n, *c);
        let specs: Vec<NormSpec> = if args.norms.is_empty() {
            norm_grid(n)
        } else {
            args.norms
                .iter()
                .copied()
                .filter(|s| s.validate(n).is_ok())
                .collect()
        };
        let obj = Objective::new(z.clone(), NormSpec::Frobenius, Mode::FullLog)?;
        let sseed = case_seed(seed, n, c);
        let results = random_search_grid(&obj, &specs, &mode_list, args.trials, sseed)?;
        let mut flagged = false;
        for (r, (m, s)) in results
            .iter()
            .zip(modes.iter().flat_map(|m| specs.iter().map(move |s| (m, s))))
        {
            let at_up = obj
                .with_spec(*s)?
                .with_mode(m.1)
                .evaluate(obj.u_p())?
                .or_infinity();
            let search_slack = r.margin() + rel_tol(tol, r.baseline);
            let up_slack = 1e-10 * (1.0 + r.baseline) - (at_up - r.baseline).abs();
            flagged |= r.flagged;
            report.push(case(
                "search",
                n,
                z,
                format!("{s}/{}", m.1.label()),
                vec![
                    ("baseline", r.baseline),
                    ("best_value", r.best_value),
                    ("value_at_polar_factor", at_up),
                    ("best_index", r.best_index as f64),
                    ("skipped", r.skipped as f64),
                ],
                search_slack.min(up_slack),
            ));
        }
        if flagged {
            report.notes.push(format!(
                "matrix {} (n={n}): more than 1% of samples hit the branch cut",
                digest(z)
            ));
        }
        if modes.iter().any(|(_, m)| matches!(m, Mode::Family(_))) {
            let l = polarlog::matfun::logm_principal(&obj.u_p().adjoint_mul(z))?;
            let skw = skw_part(&l).frobenius_norm();
            report.push(case(
                "family",
                n,
                z,
                "skw log at polar factor".into(),
                vec![("frobenius", skw)],
                1e-10 - skw,
            ));
        }

        if args.descent_steps == 0 {
            continue;
        }
        let g = chart_gradient(&obj, &ComplexMatrix::zeros(n, n), FD_STEP)?;
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        report.push(case(
            "stationarity",
            n,
            z,
            "fro/full gradient at S=0".into(),
            vec![("gradient_norm", gnorm)],
            1e-5 - gnorm,
        ));
        let mut rng = rng_for(sseed, u64::MAX - 1);
        for (_, mode) in &modes {
            for spec in &specs {
                let o = obj.with_spec(*spec)?.with_mode(*mode);
                let s0 = random_skew(n, 1e-2, &mut rng);
                let d = local_descent(&o, &s0, args.descent_steps, 0.05)?;
                let monotone = d.history.windows(2).all(|w| w[1] <= w[0]);
                let mut slack = d.value - d.baseline + rel_tol(tol, d.baseline);
                if !monotone {
                    slack = slack.min(-1.0);
                }
                report.push(case(
                    "descent",
                    n,
                    z,
                    format!("{spec}/{}", mode.label()),
                    vec![
                        ("baseline", d.baseline),
                        ("value", d.value),
                        ("gap", d.value - d.baseline),
                        ("steps", d.steps as f64),
                    ],
                    slack,
                ));
            }
        }
    }
    Ok(report)
}

fn random_normal<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let u = haar_unitary(n, rng);
    let lambda: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)))
        .collect();
    u.matmul(&ComplexMatrix::from_diag(&lambda)).mul_adjoint(&u)
}

pub fn cmd_cohen(args: &CohenArgs) -> CmdResult {
    let seed = args.common.seed;
    let tol = args.common.tol;
    let mut inputs: Vec<(usize, usize, ComplexMatrix)> = Vec::new();
    if let Some(path) = &args.input {
        let a = square_input(path)?;
        inputs.push((a.rows(), 0, a));
    } else {
        for n in args.dims.iter() {
            for c in 0..args.cases {
                let mut rng = rng_for(seed, stream(n, c));
                let a = if args.normal {
                    random_normal(n, &mut rng)
                } else {
                    complex_gaussian(n, n, &mut rng)
                };
                inputs.push((n, c, a));
            }
        }
    }
    if let Some((n, _, _)) = inputs.iter().find(|(n, _, _)| *n > MAX_COMPOUND_DIM) {
        return Err(CliError(format!(
            "compound traces are limited to n <= {MAX_COMPOUND_DIM}, got {n}"
        )));
    }

    let mut report = ExperimentReport::new("cohen", config_json(args));
    for (n, c, a) in &inputs {
        let (n, c) = (*n, *c);
        let r = cohen_check(a, tol)?;
        let worst = r
            .entries
            .iter()
            .map(|e| e.slack + rel_tol(tol, e.rhs))
            .fold(f64::INFINITY, f64::min);
        report.push(case(
            "trace",
            n,
            a,
            "tr_i^k(e^A e^A*) <= tr_i^k(e^(A+A*))".into(),
            vec![
                ("min_slack", r.min_slack),
                ("max_rel_gap", r.max_rel_gap),
                ("pairs", r.entries.len() as f64),
            ],
            worst,
        ));
        let normal = a.matmul(&a.adjoint()).rel_dist(&a.adjoint().matmul(a)) <= 1e-12;
        if normal {
            report.push(case(
                "trace-equality",
                n,
                a,
                "normal input gives equality".into(),
                vec![("max_rel_gap", r.max_rel_gap)],
                tol - r.max_rel_gap,
            ));
        }

        // majorization chain on a fresh (q, d) pair tied to this case
        let mut rng = rng_for(case_seed(seed, n, c), 0);
        let q = haar_unitary(n, &mut rng);
        let mut d: Vec<f64> = (0..n)
            .map(|_| rng.random_range(-2.0f64..2.0).exp())
            .collect();
        d.sort_by(|x, y| y.total_cmp(x));
        let dz = ComplexMatrix::from_real_diag(&d);
        let w = log_majorization_witness_tol(&q, &d, tol)?;
        let chain = cohen_symmetric_chain(&q, &d, tol)?;
        let chain_slack = chain
            .entries
            .iter()
            .map(|e| e.slack + rel_tol(tol, e.rhs))
            .fold(f64::INFINITY, f64::min);
        let mut slack = (w.verdict.min_slack + tol)
            .min(1e-10 - w.det_rel_error)
            .min(chain_slack);
        if !(w.verdict.strong && w.squared_chain_holds && chain.det_equal) {
            slack = slack.min(-1.0);
        }
        report.push(case(
            "chain",
            n,
            &dz,
            "log d majorized by log x".into(),
            vec![
                ("det_rel_error", w.det_rel_error),
                ("min_slack", w.verdict.min_slack),
                ("chain_min_slack", chain_slack),
            ],
            slack,
        ));
        if n == 3 {
            let (conditions, conclusion) = ssli_check(&chain.y, &chain.a, tol)?;
            let ok = !conditions || conclusion;
            let sq = |v: &[f64]| v.iter().map(|x| x.ln().powi(2)).sum::<f64>();
            report.push(case(
                "ssli",
                n,
                &dz,
                "sum log^2 y >= sum log^2 a".into(),
                vec![
                    ("conditions", conditions as u8 as f64),
                    ("lhs", sq(&chain.y)),
                    ("rhs", sq(&chain.a)),
                ],
                if ok {
                    sq(&chain.y) - sq(&chain.a) + tol
                } else {
                    -1.0
                },
            ));
        }
    }
    Ok(report)
}

/// Draws a matrix whose `|log σ_i|` are pairwise separated.
fn generic_matrix(n: usize, log_cond: f64, seed: u64, s: u64) -> Result<ComplexMatrix, CliError> {
    let mut rng = rng_for(seed, s);
    for _ in 0..1000 {
        let z = nonsingular_with(n, log_cond, &mut rng);
        let mut l: Vec<f64> = singular_values(&z)?.iter().map(|v| v.ln().abs()).collect();
        l.sort_by(|a, b| b.total_cmp(a));
        if l.windows(2).all(|w| w[0] - w[1] >= MIN_LOG_SEPARATION)
            && l.last().is_none_or(|&v| v >= MIN_LOG_SEPARATION)
        {
            return Ok(z);
        }
    }
    Err(CliError(format!(
        "could not draw a matrix with separated log singular values at n={n}; raise --log-cond"
    )))
}

pub fn cmd_kyfan(args: &KyfanArgs) -> CmdResult {
    let mut report = ExperimentReport::new("kyfan", config_json(args));
    if args.rectangular {
        let r = rectangular_counterexample_check()?;
        let e = 1e-12;
        let ln_sqrt2 = std::f64::consts::LN_2 / 2.0;
        let z = &r.z;
        report.push(case(
            "rectangular",
            1,
            z,
            "|log(U_p*Z)| = ln sqrt 2".into(),
            vec![("value", r.log_at_up)],
            e - (r.log_at_up - ln_sqrt2).abs(),
        ));
        report.push(case(
            "rectangular",
            1,
            z,
            "|log(V*Z)| = 0".into(),
            vec![("value", r.log_at_v)],
            e - r.log_at_v.abs(),
        ));
        report.push(case(
            "rectangular",
            1,
            z,
            "V beats U_p".into(),
            vec![("at_up", r.log_at_up), ("at_v", r.log_at_v)],
            r.log_at_up - r.log_at_v,
        ));
        report.push(case(
            "rectangular",
            1,
            z,
            "||Z-U_p|| = sqrt 2 - 1 <= ||Z-V||".into(),
            vec![
                ("at_up", r.dist_at_up),
                ("at_v", r.dist_at_v),
                ("h_minus_one", r.h_minus_one),
            ],
            (e - (r.dist_at_up - (2f64.sqrt() - 1.0)).abs()).min(r.dist_at_v - r.dist_at_up),
        ));
        report.push(case(
            "rectangular",
            1,
            z,
            "U_p nearest among sampled isometries".into(),
            vec![
                ("sampled_min", r.sampled_min_dist),
                ("samples", r.samples as f64),
            ],
            r.sampled_min_dist - r.dist_at_up + e,
        ));
        report.notes.push(format!(
            "log(U_p*Z) = ln sqrt 2 = {:.17}, not 1/sqrt 2",
            r.log_at_up
        ));
        report.artifacts.insert("u_p".into(), matrix_json(&r.u_p));
        return Ok(report);
    }

    let seed = args.common.seed;
    let tol = args.common.tol;
    let mut inputs: Vec<(usize, usize, ComplexMatrix)> = Vec::new();
    if let Some(path) = &args.input {
        let z = square_input(path)?;
        inputs.push((z.rows(), 0, z));
    } else {
        for n in args.dims.iter() {
            for c in 0..args.cases {
                inputs.push((n, c, generic_matrix(n, args.log_cond, seed, stream(n, c))?));
            }
        }
    }
    for (n, c, z) in &inputs {
        let (n, c) = (*n, *c);
        let sseed = case_seed(seed, n, c);
        let mut rng = rng_for(sseed, 0);
        let up = polar(z)?.unitary;
        for k in 1..=n {
            let member = match args.q22 {
                Q22Arg::Identity => Some(kyfan_minimizer_family(
                    z,
                    k,
                    &ComplexMatrix::identity(n - k),
                )?),
                Q22Arg::Random if k < n => {
                    sample_admissible_member(z, k, &mut rng)?.map(|(_, m)| m)
                }
                Q22Arg::Random => None,
            };
            let Some(m) = member else { continue };
            let dist = (&m.q_hat - &up).frobenius_norm();
            let mut slack = rel_tol(tol, m.target) - (m.value_k - m.target).abs();
            if !m.admissible {
                slack = slack.min(-1.0);
            }
            if args.q22 == Q22Arg::Identity {
                slack = slack.min(1e-10 - dist);
            }
            report.push(case(
                "family",
                n,
                z,
                format!("kyfan:{k}"),
                vec![
                    ("value_k", m.value_k),
                    ("target", m.target),
                    ("condition_lhs", m.condition_lhs),
                    ("condition_rhs", m.condition_rhs),
                    ("distance_to_polar_factor", dist),
                ],
                slack,
            ));
        }
        if n < 2 {
            continue;
        }
        match uniqueness_probe(z, 1e-6, sseed) {
            Ok(p) => {
                let min_excess = p
                    .family
                    .iter()
                    .filter_map(|f| f.failing_k.map(|(_, e)| e))
                    .fold(f64::INFINITY, f64::min);
                let max_dist = p
                    .descents
                    .iter()
                    .filter(|d| d.achieves_all)
                    .map(|d| d.distance_to_up)
                    .fold(0.0, f64::max);
                let achieving = p.descents.iter().filter(|d| d.achieves_all).count();
                report.push(case(
                    "uniqueness",
                    n,
                    z,
                    "only U_p minimizes every Ky Fan norm".into(),
                    vec![
                        ("family_members", p.family.len() as f64),
                        ("min_failing_excess", min_excess),
                        ("descents_at_minimum", achieving as f64),
                        ("max_distance_to_polar_factor", max_dist),
                    ],
                    if p.pass { p.tol - max_dist } else { -1.0 },
                ));
            }
            Err(LinalgError::Precondition(msg)) => {
                report
                    .notes
                    .push(format!("uniqueness probe skipped for {}: {msg}", digest(z)));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(report)
}
