use crate::densekit::{haar_unitary, rng_for, ComplexMatrix, C64};
use crate::error::{LinalgError, Result};
use crate::matfun::{skw_part, sym_part};
use crate::norms::{ui_norm, NormSpec, SymSkwWeights};
use rand::Rng;

use super::objective::{baseline_for, LogSpectra, Mode, Objective};

/// Fraction of branch-cut skips above which a search is flagged.
pub const SKIP_FLAG_FRACTION: f64 = 0.01;

/// Outcome of a randomized minimization over U(n).
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_q: ComplexMatrix,
    pub best_value: f64,
    /// Objective value predicted as the minimum (at `U_p`, principal branch).
    pub baseline: f64,
    /// Number of Haar samples.
    pub trials: usize,
    /// Number of structured candidates evaluated before the Haar samples.
    pub structured: usize,
    pub seed: u64,
    /// Candidate index of `best_q` (structured candidates first).
    pub best_index: usize,
    /// Candidates skipped because `Q*Z` touched the branch cut.
    pub skipped: usize,
    /// More than 1% of candidates were skipped.
    pub flagged: bool,
}

impl SearchResult {
    /// `best_value - baseline`; nonnegative when the polar factor is optimal.
    pub fn margin(&self) -> f64 {
        self.best_value - self.baseline
    }
}

/// Structured candidates: `U_p`, `U_p` times diagonal phase matrices and `U_p`
/// times transpositions and a cyclic shift (each with a phase). Pure Haar sampling rarely lands near
/// these competing configurations.
pub fn structured_candidates(u_p: &ComplexMatrix, seed: u64) -> Vec<ComplexMatrix> {
    let n = u_p.rows();
    let mut out = vec![u_p.clone()];
    let mut rng = rng_for(seed, u64::MAX);
    for scale in [0.05, 0.5, 1.5, 3.0] {
        let phases: Vec<C64> = (0..n)
            .map(|_| C64::from_polar(1.0, rng.random_range(-scale..=scale)))
            .collect();
        out.push(u_p.matmul(&ComplexMatrix::from_diag(&phases)));
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(i, j);
            perms.push(p);
        }
    }
    if n > 2 {
        perms.push((0..n).map(|i| (i + 1) % n).collect());
    }
    // A bare transposition makes Q*Z similar to a Hermitian matrix with one negative
    // eigenvalue, exactly on the branch cut; a generic phase moves it off.
    for p in perms {
        let phases: Vec<C64> = (0..n)
            .map(|_| C64::from_polar(1.0, rng.random_range(-0.5..=0.5)))
            .collect();
        out.push(
            u_p.permute_columns(&p)
                .matmul(&ComplexMatrix::from_diag(&phases)),
        );
    }
    out
}

/// Haar sample number `index` of a search seeded with `seed`.
pub fn haar_trial(n: usize, seed: u64, index: u64) -> ComplexMatrix {
    haar_unitary(n, &mut rng_for(seed, index))
}

/// Minimizes one objective over structured candidates plus `trials` Haar samples.
pub fn random_search_min(obj: &Objective, trials: usize, seed: u64) -> Result<SearchResult> {
    let mut results = random_search_grid(obj, &[obj.spec()], &[obj.mode()], trials, seed)?;
    Ok(results.remove(0))
}

/// Runs the same candidate set against every `(mode, spec)` pair, evaluating the
/// logarithm once per candidate. Results are ordered mode-major.
pub fn random_search_grid(
    obj: &Objective,
    specs: &[NormSpec],
    modes: &[Mode],
    trials: usize,
    seed: u64,
) -> Result<Vec<SearchResult>> {
    if trials == 0 {
        return Err(LinalgError::Parameter("trials must be at least 1".into()));
    }
    for s in specs {
        s.validate(obj.dim())?;
    }
    let n = obj.dim();
    let with_skw = modes.iter().any(|m| matches!(m, Mode::Family(_)));
    let pairs: Vec<(Mode, NormSpec)> = modes
        .iter()
        .flat_map(|&m| specs.iter().map(move |&s| (m, s)))
        .collect();
    let structured = structured_candidates(obj.u_p(), seed);
    let n_struct = structured.len();

    let mut best: Vec<(f64, usize, Option<ComplexMatrix>)> =
        vec![(f64::INFINITY, usize::MAX, None); pairs.len()];
    let mut skipped = 0usize;
    let total = n_struct + trials;
    for idx in 0..total {
        let q = match structured.get(idx) {
            Some(c) => c.clone(),
            None => haar_trial(n, seed, (idx - n_struct) as u64),
        };
        let Some(spectra) = LogSpectra::of(obj.z(), &q, with_skw)? else {
            skipped += 1;
            continue;
        };
        for (slot, &(mode, spec)) in best.iter_mut().zip(&pairs) {
            let v = spectra.value(spec, mode);
            if v < slot.0 {
                *slot = (v, idx, Some(q.clone()));
            }
        }
    }
    let flagged = skipped as f64 > SKIP_FLAG_FRACTION * total as f64;
    Ok(best
        .into_iter()
        .zip(&pairs)
        .map(|((v, idx, q), &(mode, spec))| SearchResult {
            best_q: q.unwrap_or_else(|| obj.u_p().clone()),
            best_value: v,
            baseline: baseline_for(obj.log_h_spectrum(), spec, mode),
            trials,
            structured: n_struct,
            seed,
            best_index: idx,
            skipped,
            flagged,
        })
        .collect())
}

/// Distance from `Z` to the polar factor compared with sampled unitaries.
#[derive(Debug, Clone)]
pub struct NearestUnitaryGap {
    /// `‖Z - U_p‖`.
    pub at_up: f64,
    /// `‖H - I‖`, equal to `at_up` by unitary invariance.
    pub h_minus_i: f64,
    /// Smallest `‖Z - Q‖` over Haar samples.
    pub sampled_min: f64,
}

pub fn nearest_unitary_gap(
    z: &ComplexMatrix,
    spec: NormSpec,
    trials: usize,
    seed: u64,
) -> Result<NearestUnitaryGap> {
    let obj = Objective::new(z.clone(), spec, Mode::FullLog)?;
    let n = obj.dim();
    let at_up = ui_norm(&(z - obj.u_p()), spec)?;
    let h_minus_i = ui_norm(
        &obj.polar().hermitian.add_identity(C64::new(-1.0, 0.0)),
        spec,
    )?;
    let mut sampled_min = f64::INFINITY;
    for t in 0..trials {
        let q = haar_trial(n, seed, t as u64);
        sampled_min = sampled_min.min(ui_norm(&(z - &q), spec)?);
    }
    Ok(NearestUnitaryGap {
        at_up,
        h_minus_i,
        sampled_min,
    })
}

/// Search for `Q` beating `U_p` on `μ‖sym(Q*Z - I)‖ + μ_c‖skw(Q*Z - I)‖`.
#[derive(Debug, Clone)]
pub struct LinearFamilySearch {
    /// `baseline` holds the value at `U_p`.
    pub result: SearchResult,
    /// Some sampled `Q` scored strictly below `U_p` (beyond `tol`).
    pub counterexample_found: bool,
}

pub fn linear_family_value(
    z: &ComplexMatrix,
    q: &ComplexMatrix,
    w: SymSkwWeights,
    spec: NormSpec,
) -> Result<f64> {
    let x = q.adjoint_mul(z).add_identity(C64::new(-1.0, 0.0));
    Ok(w.mu() * ui_norm(&sym_part(&x), spec)? + w.mu_c() * ui_norm(&skw_part(&x), spec)?)
}

/// Exploratory search over the linear family. Weights must satisfy `0 < μ_c <= μ`;
/// `μ_c = μ` is admitted as the nearest-unitary reference case.
pub fn linear_family_counterexample_search(
    z: &ComplexMatrix,
    w: SymSkwWeights,
    spec: NormSpec,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<LinearFamilySearch> {
    if !(w.mu_c() > 0.0 && w.mu_c() <= w.mu()) {
        return Err(LinalgError::Parameter(format!(
            "linear family requires 0 < mu_c <= mu, got mu={}, mu_c={}",
            w.mu(),
            w.mu_c()
        )));
    }
    if trials == 0 {
        return Err(LinalgError::Parameter("trials must be at least 1".into()));
    }
    let obj = Objective::new(z.clone(), spec, Mode::FullLog)?;
    let n = obj.dim();
    let at_up = linear_family_value(z, obj.u_p(), w, spec)?;
    let structured = structured_candidates(obj.u_p(), seed);
    let n_struct = structured.len();
    let (mut best_value, mut best_index, mut best_q) = (f64::INFINITY, 0usize, obj.u_p().clone());
    for idx in 0..n_struct + trials {
        let q = match structured.get(idx) {
            Some(c) => c.clone(),
            None => haar_trial(n, seed, (idx - n_struct) as u64),
        };
        let v = linear_family_value(z, &q, w, spec)?;
        if v < best_value {
            (best_value, best_index, best_q) = (v, idx, q);
        }
    }
    Ok(LinearFamilySearch {
        counterexample_found: best_value < at_up - tol * (1.0 + at_up),
        result: SearchResult {
            best_q,
            best_value,
            baseline: at_up,
            trials,
            structured: n_struct,
            seed,
            best_index,
            skipped: 0,
            flagged: false,
        },
    })
}
