//! Penalised EM for mixtures of von Mises-Fisher distributions.
//!
//! The objective is the observed log-likelihood minus `β Σ_k ‖μ_k‖₁`. The
//! M-step has no closed form when `β > 0`: the means are soft-thresholded
//! resultants whose threshold depends on `κ`, so `μ` and `κ` are updated in a
//! short fixed-point loop, `μ` first and then `κ`.

use ndarray::{Array2, ArrayView1, Axis};
use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::stream_rng;
use crate::special::log_vmf_normalizer;
use crate::vmf::{kappa_from_rbar, KAPPA_CAP, MEAN_NORM_TOL};

/// Rows per work unit in the parallel kernels. Fixed so that reductions
/// happen in the same order whatever the number of threads.
const CHUNK_ROWS: usize = 256;

/// Components whose total responsibility falls below this are empty.
pub const EMPTY_COMPONENT_MASS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KappaMode {
    #[default]
    Free,
    Shared,
}

impl std::str::FromStr for KappaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(KappaMode::Free),
            "shared" => Ok(KappaMode::Shared),
            other => Err(Error::Config(format!("unknown kappa mode {other:?} (expected free or shared)"))),
        }
    }
}

impl std::fmt::Display for KappaMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KappaMode::Free => "free",
            KappaMode::Shared => "shared",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kappas {
    Free(Vec<f64>),
    Shared(f64),
}

impl Kappas {
    pub fn mode(&self) -> KappaMode {
        match self {
            Kappas::Free(_) => KappaMode::Free,
            Kappas::Shared(_) => KappaMode::Shared,
        }
    }

    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        match self {
            Kappas::Free(v) => v[k],
            Kappas::Shared(v) => *v,
        }
    }

    /// One value per component.
    pub fn expand(&self, k: usize) -> Vec<f64> {
        (0..k).map(|i| self.get(i)).collect()
    }
}

/// `(α, μ, κ)` for a `K`-component mixture in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureParams {
    pub alpha: Vec<f64>,
    /// `K × d`, unit rows.
    pub means: Array2<f64>,
    pub kappas: Kappas,
}

impl MixtureParams {
    pub fn new(alpha: Vec<f64>, means: Array2<f64>, kappas: Kappas) -> Result<Self> {
        let p = MixtureParams { alpha, means: means.as_standard_layout().into_owned(), kappas };
        p.validate()?;
        Ok(p)
    }

    pub fn n_components(&self) -> usize {
        self.alpha.len()
    }

    pub fn dim(&self) -> usize {
        self.means.ncols()
    }

    pub fn kappa_mode(&self) -> KappaMode {
        self.kappas.mode()
    }

    #[inline]
    pub fn kappa(&self, k: usize) -> f64 {
        self.kappas.get(k)
    }

    pub fn mean(&self, k: usize) -> &[f64] {
        self.means.row(k).to_slice().expect("standard layout")
    }

    /// `Σ_k ‖μ_k‖₁`
    pub fn l1_penalty(&self) -> f64 {
        self.means.rows().into_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.alpha.len();
        if k == 0 {
            return Err(Error::Domain("mixture needs at least one component".into()));
        }
        if self.means.nrows() != k {
            return Err(Error::DimensionMismatch { expected: k, got: self.means.nrows() });
        }
        if self.dim() < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {}", self.dim())));
        }
        if let Kappas::Free(v) = &self.kappas {
            if v.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: v.len() });
            }
        }
        if self.alpha.iter().any(|a| !(*a >= 0.0)) || (self.alpha.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("mixing proportions must be >= 0 and sum to 1: {:?}", self.alpha)));
        }
        for (i, row) in self.means.rows().into_iter().enumerate() {
            let n = row.dot(&row).sqrt();
            if (n - 1.0).abs() > MEAN_NORM_TOL {
                return Err(Error::Domain(format!("mean {i} has norm {n}, expected 1")));
            }
        }
        for i in 0..k {
            let kappa = self.kappa(i);
            if !(kappa > 0.0 && kappa <= KAPPA_CAP) {
                return Err(Error::Domain(format!("kappa {i} = {kappa} outside (0, {KAPPA_CAP}]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Responsibilities {
    /// `N × K` posteriors.
    pub tau: Array2<f64>,
    /// `log Σ_k α_k f_k(x_i)` per observation.
    pub log_marginals: Vec<f64>,
    /// Observed log-likelihood, the sum of `log_marginals`.
    pub log_likelihood: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitOptions {
    pub beta: f64,
    pub max_em_iters: usize,
    /// Relative change of the penalised log-likelihood that stops EM.
    pub em_tol: f64,
    /// When positive, EM additionally requires the largest parameter change
    /// between iterations (`|Δα|`, `|Δμ|`, `|Δκ|/κ`) to fall below this.
    pub param_tol: f64,
    pub inner_max_iters: usize,
    pub inner_tol: f64,
    pub kappa_cap: f64,
    pub kappa_mode: KappaMode,
    /// Newton refinement of the closed-form κ estimate.
    pub refine_kappa: bool,
    pub seed: u64,
    /// RNG stream used for random initialisation.
    pub stream: u64,
    pub max_init_attempts: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            beta: 0.0,
            max_em_iters: 500,
            em_tol: 1e-6,
            param_tol: 0.0,
            inner_max_iters: 100,
            inner_tol: 1e-8,
            kappa_cap: KAPPA_CAP,
            kappa_mode: KappaMode::Free,
            refine_kappa: false,
            seed: 0,
            stream: 0,
            max_init_attempts: 100,
        }
    }
}

impl FitOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(what.to_string()));
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad("beta must be finite and >= 0");
        }
        if !(self.em_tol > 0.0) || !(self.inner_tol > 0.0) {
            return bad("tolerances must be > 0");
        }
        if !(self.param_tol >= 0.0) {
            return bad("param_tol must be >= 0");
        }
        if self.max_em_iters == 0 || self.inner_max_iters == 0 || self.max_init_attempts == 0 {
            return bad("iteration limits must be >= 1");
        }
        if !(self.kappa_cap > 0.0 && self.kappa_cap <= KAPPA_CAP) {
            return bad("kappa_cap must lie in (0, 1e6]");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FitStatus {
    Converged,
    MaxIters,
    DegenerateUniform,
    ZeroMean,
    EmptyComponent,
}

impl FitStatus {
    /// Converged or stopped at the iteration limit with valid parameters.
    pub fn is_usable(self) -> bool {
        matches!(self, FitStatus::Converged | FitStatus::MaxIters)
    }
}

impl std::fmt::Display for FitStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Final parameters; on failure, the last valid ones.
    pub params: MixtureParams,
    pub beta: f64,
    pub log_likelihood: f64,
    pub penalized_log_likelihood: f64,
    /// Penalised log-likelihood before the first M-step and after each one.
    pub trace: Vec<f64>,
    pub n_iters: usize,
    pub status: FitStatus,
    /// Component that triggered a failure status.
    pub failed_component: Option<usize>,
}

/// Log of `α_k c_d(κ_k)` per component.
fn log_weights(params: &MixtureParams) -> Vec<f64> {
    let d = params.dim();
    (0..params.n_components())
        .map(|k| params.alpha[k].ln() + log_vmf_normalizer(d, params.kappa(k)).expect("valid parameters"))
        .collect()
}

pub fn e_step(x: &Dataset, params: &MixtureParams) -> Responsibilities {
    let n = x.n_rows();
    let k = params.n_components();
    assert_eq!(x.dim(), params.dim(), "data and parameters disagree on dimension");
    let lw = log_weights(params);
    let kappas = params.kappas.expand(k);
    let mut tau = Array2::zeros((n, k));
    let mut log_marginals = vec![0.0; n];
    tau.as_slice_mut()
        .expect("standard layout")
        .par_chunks_mut(CHUNK_ROWS * k)
        .zip(log_marginals.par_chunks_mut(CHUNK_ROWS))
        .enumerate()
        .for_each(|(c, (tau_chunk, lm_chunk))| {
            for (local, (t, lm)) in tau_chunk.chunks_mut(k).zip(lm_chunk.iter_mut()).enumerate() {
                let row = x.row(c * CHUNK_ROWS + local);
                for j in 0..k {
                    t[j] = lw[j] + kappas[j] * row.dot(params.mean(j));
                }
                let lse = linalg::log_sum_exp(t);
                t.iter_mut().for_each(|v| *v = (*v - lse).exp());
                *lm = lse;
            }
        });
    let log_likelihood = log_marginals.iter().sum();
    Responsibilities { tau, log_marginals, log_likelihood }
}

/// `r_k = Σ_i τ_ik x_i`, one row per component.
pub fn resultants(x: &Dataset, tau: &Array2<f64>) -> Array2<f64> {
    let (n, k) = tau.dim();
    let d = x.dim();
    let partials: Vec<Array2<f64>> = (0..n.div_ceil(CHUNK_ROWS))
        .into_par_iter()
        .map(|c| {
            let mut r = Array2::zeros((k, d));
            for i in c * CHUNK_ROWS..((c + 1) * CHUNK_ROWS).min(n) {
                let row = x.row(i);
                for j in 0..k {
                    let w = tau[[i, j]];
                    if w != 0.0 {
                        row.axpy(w, r.row_mut(j).as_slice_mut().expect("standard layout"));
                    }
                }
            }
            r
        })
        .collect();
    let mut r = Array2::zeros((k, d));
    for p in &partials {
        r += p;
    }
    r
}

/// Maximiser of `κ⟨μ, r⟩ − β‖μ‖₁` on the unit sphere:
/// `μ_j ∝ sign(r_j) max(κ|r_j| − β, 0)`.
///
/// Fails with a `ZeroMean` status when every coordinate is thresholded away.
pub fn soft_threshold_mu(r: ArrayView1<'_, f64>, kappa: f64, beta: f64) -> Result<Vec<f64>> {
    let mut mu: Vec<f64> = r.iter().map(|&v| v.signum() * (kappa * v.abs() - beta).max(0.0)).collect();
    if linalg::normalize_in_place(&mut mu) == 0.0 {
        return Err(Error::Em { status: FitStatus::ZeroMean, component: 0 });
    }
    Ok(mu)
}

fn em_error(status: FitStatus, component: usize) -> Error {
    Error::Em { status, component }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MStep {
    pub params: MixtureParams,
    pub inner_iters: usize,
    pub inner_converged: bool,
}

/// κ from the M-step ratio `ρ`, which plays the role of the mean resultant
/// length once the means are sparsified.
fn kappa_from_rho(d: usize, rho: f64, opts: &FitOptions, component: usize) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(em_error(FitStatus::DegenerateUniform, component));
    }
    Ok(kappa_from_rbar(d, rho, opts.refine_kappa, opts.kappa_cap)?.0)
}

pub fn m_step(x: &Dataset, resp: &Responsibilities, prev: &MixtureParams, opts: &FitOptions) -> Result<MStep> {
    let d = x.dim();
    let k = prev.n_components();
    let beta = opts.beta;
    let mass: Vec<f64> = resp.tau.axis_iter(Axis(1)).map(|c| c.sum()).collect();
    if let Some(j) = mass.iter().position(|&m| m < EMPTY_COMPONENT_MASS) {
        return Err(em_error(FitStatus::EmptyComponent, j));
    }
    let total: f64 = mass.iter().sum();
    let alpha: Vec<f64> = mass.iter().map(|m| m / total).collect();
    let r = resultants(x, &resp.tau);

    let mut kappas = match (opts.kappa_mode, &prev.kappas) {
        (KappaMode::Free, kp) => kp.expand(k),
        (KappaMode::Shared, Kappas::Shared(v)) => vec![*v; k],
        (KappaMode::Shared, Kappas::Free(v)) => {
            vec![v.iter().zip(&prev.alpha).map(|(a, b)| a * b).sum(); k]
        }
    };
    let mut means = prev.means.clone();
    let mut inner_iters = 0;
    let mut inner_converged = false;
    for _ in 0..opts.inner_max_iters {
        inner_iters += 1;
        let mut delta: f64 = 0.0;
        for j in 0..k {
            let mu = soft_threshold_mu(r.row(j), kappas[j], beta).map_err(|_| em_error(FitStatus::ZeroMean, j))?;
            for (old, new) in means.row_mut(j).iter_mut().zip(&mu) {
                delta = delta.max((*old - new).abs());
                *old = *new;
            }
        }
        let new_kappas = match opts.kappa_mode {
            KappaMode::Free => (0..k)
                .map(|j| kappa_from_rho(d, means.row(j).dot(&r.row(j)) / mass[j], opts, j))
                .collect::<Result<Vec<f64>>>()?,
            KappaMode::Shared => {
                let rho = (0..k).map(|j| means.row(j).dot(&r.row(j))).sum::<f64>() / total;
                vec![kappa_from_rho(d, rho, opts, 0)?; k]
            }
        };
        for (old, new) in kappas.iter_mut().zip(new_kappas) {
            delta = delta.max((*old - new).abs() / new);
            *old = new;
        }
        if delta < opts.inner_tol {
            inner_converged = true;
            break;
        }
    }
    let kappas = match opts.kappa_mode {
        KappaMode::Free => Kappas::Free(kappas),
        KappaMode::Shared => Kappas::Shared(kappas[0]),
    };
    Ok(MStep { params: MixtureParams { alpha, means, kappas }, inner_iters, inner_converged })
}

/// Random start: `K` distinct observations as means, crisp nearest-mean
/// assignment, then proportions and concentrations from the crisp clusters.
pub fn init_random<R: rand::Rng + ?Sized>(
    x: &Dataset,
    k: usize,
    mode: KappaMode,
    refine: bool,
    rng: &mut R,
) -> Result<MixtureParams> {
    let n = x.n_rows();
    if n < k || k == 0 {
        return Err(Error::TooFew { needed: k.max(1), got: n });
    }
    let d = x.dim();
    let picked = index::sample(rng, n, k).into_vec();
    let mut seeds = Array2::zeros((k, d));
    for (j, &i) in picked.iter().enumerate() {
        x.row(i).axpy(1.0, seeds.row_mut(j).as_slice_mut().expect("standard layout"));
    }
    let mut counts = vec![0usize; k];
    let mut r = Array2::<f64>::zeros((k, d));
    let mut scores = vec![0.0; k];
    for row in x.rows() {
        for (j, s) in scores.iter_mut().enumerate() {
            *s = row.dot(seeds.row(j).as_slice().expect("standard layout"));
        }
        let j = linalg::argmax(&scores);
        counts[j] += 1;
        row.axpy(1.0, r.row_mut(j).as_slice_mut().expect("standard layout"));
    }
    let fail = |reason: String| Error::InitFailure { attempts: 1, reason };
    if let Some(j) = counts.iter().position(|&c| c == 0) {
        return Err(fail(format!("crisp cluster {j} is empty")));
    }
    let mut lengths = vec![0.0; k];
    for j in 0..k {
        let len = linalg::normalize_in_place(r.row_mut(j).as_slice_mut().expect("standard layout"));
        if len <= 1e-12 * counts[j] as f64 {
            return Err(fail(format!("resultant of crisp cluster {j} vanishes")));
        }
        lengths[j] = len;
    }
    let alpha: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let kappas = match mode {
        KappaMode::Free => Kappas::Free(
            (0..k)
                .map(|j| Ok(kappa_from_rbar(d, lengths[j] / counts[j] as f64, refine, KAPPA_CAP)?.0))
                .collect::<Result<Vec<f64>>>()?,
        ),
        KappaMode::Shared => {
            Kappas::Shared(kappa_from_rbar(d, lengths.iter().sum::<f64>() / n as f64, refine, KAPPA_CAP)?.0)
        }
    };
    if (0..k).any(|j| !(kappas.get(j) > 0.0)) {
        return Err(fail("concentration estimate is zero".into()));
    }
    Ok(MixtureParams { alpha, means: r, kappas })
}

fn max_param_change(a: &MixtureParams, b: &MixtureParams) -> f64 {
    let mut delta: f64 = 0.0;
    for (x, y) in a.alpha.iter().zip(&b.alpha) {
        delta = delta.max((x - y).abs());
    }
    for (x, y) in a.means.iter().zip(b.means.iter()) {
        delta = delta.max((x - y).abs());
    }
    for j in 0..a.n_components() {
        delta = delta.max((a.kappa(j) - b.kappa(j)).abs() / b.kappa(j));
    }
    delta
}

/// Draws an initial configuration, retrying up to `opts.max_init_attempts`
/// times on the RNG stream `(opts.seed, opts.stream)`.
pub fn init_with_retries(x: &Dataset, k: usize, opts: &FitOptions) -> Result<MixtureParams> {
    let mut rng = stream_rng(opts.seed, opts.stream);
    let mut last = String::new();
    for _ in 0..opts.max_init_attempts {
        match init_random(x, k, opts.kappa_mode, opts.refine_kappa, &mut rng) {
            Ok(p) => return Ok(p),
            Err(Error::InitFailure { reason, .. }) => last = reason,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InitFailure { attempts: opts.max_init_attempts, reason: last })
}

/// Runs penalised EM from `init`, or from a random start when `init` is
/// `None`. Numerical failures during EM are reported through
/// [`FitResult::status`] together with the last valid parameters; only
/// invalid inputs and failed initialisation return `Err`.
pub fn fit_em(x: &Dataset, k: usize, opts: &FitOptions, init: Option<&MixtureParams>) -> Result<FitResult> {
    opts.validate()?;
    if x.n_rows() < k {
        return Err(Error::TooFew { needed: k, got: x.n_rows() });
    }
    let mut params = match init {
        Some(p) => {
            p.validate()?;
            if p.n_components() != k {
                return Err(Error::DimensionMismatch { expected: k, got: p.n_components() });
            }
            if p.dim() != x.dim() {
                return Err(Error::DimensionMismatch { expected: x.dim(), got: p.dim() });
            }
            p.clone()
        }
        None => init_with_retries(x, k, opts)?,
    };
    let beta = opts.beta;
    let mut resp = e_step(x, &params);
    let mut pen = resp.log_likelihood - beta * params.l1_penalty();
    let mut trace = vec![pen];
    let mut status = FitStatus::MaxIters;
    let mut failed_component = None;
    let mut n_iters = 0;
    for _ in 0..opts.max_em_iters {
        let step = match m_step(x, &resp, &params, opts) {
            Ok(s) => s,
            Err(Error::Em { status: s, component }) => {
                status = s;
                failed_component = Some(component);
                break;
            }
            Err(e) => return Err(e),
        };
        n_iters += 1;
        let change = max_param_change(&step.params, &params);
        params = step.params;
        resp = e_step(x, &params);
        let next = resp.log_likelihood - beta * params.l1_penalty();
        trace.push(next);
        let rel = (next - pen).abs() / next.abs().max(f64::MIN_POSITIVE);
        pen = next;
        if rel < opts.em_tol && (opts.param_tol == 0.0 || change < opts.param_tol) {
            status = FitStatus::Converged;
            break;
        }
    }
    Ok(FitResult {
        params,
        beta,
        log_likelihood: resp.log_likelihood,
        penalized_log_likelihood: pen,
        trace,
        n_iters,
        status,
        failed_component,
    })
}

/// Runs `n_restarts` independent fits; restart `r` initialises from RNG
/// stream `r`. Results are returned in restart order.
pub fn fit_restarts(x: &Dataset, k: usize, opts: &FitOptions, n_restarts: usize) -> Vec<Result<FitResult>> {
    (0..n_restarts as u64)
        .into_par_iter()
        .map(|r| {
            let o = FitOptions { stream: r, ..opts.clone() };
            fit_em(x, k, &o, None)
        })
        .collect()
}

/// Index of the usable fit with the highest penalised log-likelihood; ties
/// go to the earliest restart.
pub fn best_restart(runs: &[Result<FitResult>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, run) in runs.iter().enumerate() {
        if let Ok(f) = run {
            if !f.status.is_usable() {
                continue;
            }
            match best {
                Some(b) if runs[b].as_ref().unwrap().penalized_log_likelihood >= f.penalized_log_likelihood => {}
                _ => best = Some(i),
            }
        }
    }
    best
}

/// Best of `n_restarts` random starts, or [`Error::AllRestartsFailed`].
pub fn fit_best_of(x: &Dataset, k: usize, opts: &FitOptions, n_restarts: usize) -> Result<FitResult> {
    let runs = fit_restarts(x, k, opts, n_restarts.max(1));
    match best_restart(&runs) {
        Some(i) => Ok(runs[i].clone().expect("usable run")),
        None => Err(Error::AllRestartsFailed {
            outcomes: runs
                .iter()
                .map(|r| match r {
                    Ok(f) => f.status.to_string(),
                    Err(e) => e.to_string(),
                })
                .collect(),
        }),
    }
}

/// Observed log-likelihood minus `β Σ_k ‖μ_k‖₁`.
pub fn penalized_log_likelihood(x: &Dataset, params: &MixtureParams, beta: f64) -> f64 {
    e_step(x, params).log_likelihood - beta * params.l1_penalty()
}

/// Most probable component per observation, ties to the lowest index.
pub fn hard_assign(tau: &Array2<f64>) -> Vec<usize> {
    tau.rows().into_iter().map(|r| linalg::argmax(r.as_slice().expect("standard layout"))).collect()
}
