//! Regularisation path over the penalty `β`.
//!
//! Starting from a dense fit at `β = 0`, each step raises `β` to the smallest
//! value `κ_k |r_kj|` above the current one, which is exactly where the next
//! mean coordinate is thresholded away in the first M-step, and refits EM
//! from the previous solution.

use std::fmt::Write as _;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::em::{e_step, fit_em, resultants, FitOptions, FitResult, FitStatus, MixtureParams};
use crate::error::{Error, Result};
use crate::linalg;
use crate::metrics::sparsity;
use crate::selection::{IcValues, DEFAULT_EBIC_GAMMA};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathOptions {
    /// Maximum number of recorded steps, the dense start included.
    pub max_steps: usize,
    /// Mean coordinates below this magnitude are set to zero after each fit.
    pub epsilon: f64,
    /// Each `β` is at least `(1 + min_rel_increase)` times the previous one.
    pub min_rel_increase: f64,
    /// Stop once every mean has a single non-zero coordinate.
    pub stop_at_max_sparsity: bool,
    pub ebic_gamma: f64,
    pub fit: FitOptions,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            max_steps: 1000,
            epsilon: 1e-8,
            min_rel_increase: 0.0,
            stop_at_max_sparsity: false,
            ebic_gamma: DEFAULT_EBIC_GAMMA,
            fit: FitOptions::default(),
        }
    }
}

impl PathOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be >= 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config("epsilon must be > 0".into()));
        }
        if !(self.min_rel_increase >= 0.0 && self.min_rel_increase.is_finite()) {
            return Err(Error::Config("min_rel_increase must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.ebic_gamma) {
            return Err(Error::Config("ebic_gamma must lie in [0, 1]".into()));
        }
        self.fit.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    MaxSteps,
    MaxSparsity,
    EmFailure,
    NoIncrementAvailable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathStep {
    pub beta: f64,
    pub fit: FitResult,
    pub sparsity: f64,
    pub ic: IcValues,
}

/// The fit that ended a path with a failure status.
#[derive(Debug, Clone, PartialEq)]
pub struct FailedStep {
    pub beta: f64,
    pub fit: FitResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub steps: Vec<PathStep>,
    pub termination: Termination,
    pub failure: Option<FailedStep>,
}

/// Flat per-step record for JSON/CSV output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub beta: f64,
    pub sparsity: f64,
    pub log_likelihood: f64,
    pub penalized_log_likelihood: f64,
    pub ic: Option<IcValues>,
    pub status: FitStatus,
    pub n_iters: usize,
}

impl PathResult {
    pub fn records(&self) -> Vec<StepRecord> {
        let mut out: Vec<StepRecord> = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| StepRecord {
                step: i,
                beta: s.beta,
                sparsity: s.sparsity,
                log_likelihood: s.fit.log_likelihood,
                penalized_log_likelihood: s.fit.penalized_log_likelihood,
                ic: Some(s.ic),
                status: s.fit.status,
                n_iters: s.fit.n_iters,
            })
            .collect();
        if let Some(f) = &self.failure {
            out.push(StepRecord {
                step: self.steps.len(),
                beta: f.beta,
                sparsity: sparsity(&f.fit.params),
                log_likelihood: f.fit.log_likelihood,
                penalized_log_likelihood: f.fit.penalized_log_likelihood,
                ic: None,
                status: f.fit.status,
                n_iters: f.fit.n_iters,
            });
        }
        out
    }

    /// One line per recorded step (the failed fit, if any, last).
    pub fn summary_csv(&self) -> String {
        let mut out = String::from(
            "step,beta,sparsity,log_likelihood,penalized_log_likelihood,AIC,BIC,RIC,RICc,EBIC,status,n_iters\n",
        );
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in self.records() {
            let ic = r.ic;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{:?},{}",
                r.step,
                r.beta,
                r.sparsity,
                r.log_likelihood,
                r.penalized_log_likelihood,
                opt(ic.map(|c| c.aic)),
                opt(ic.map(|c| c.bic)),
                opt(ic.map(|c| c.ric)),
                opt(ic.and_then(|c| c.ricc)),
                opt(ic.map(|c| c.ebic)),
                r.status,
                r.n_iters,
            );
        }
        out
    }
}

/// Smallest `κ_k |r_kj|` strictly above `beta_prev`, raised to at least
/// `beta_prev·(1 + min_rel_increase)`.
pub fn next_beta(params: &MixtureParams, r: &Array2<f64>, beta_prev: f64, min_rel_increase: f64) -> Result<f64> {
    let mut best = f64::INFINITY;
    for (k, row) in r.rows().into_iter().enumerate() {
        let kappa = params.kappa(k);
        for &v in row {
            let t = kappa * v.abs();
            if t > beta_prev && t < best {
                best = t;
            }
        }
    }
    if !best.is_finite() {
        return Err(Error::NoIncrementAvailable);
    }
    Ok(best.max(beta_prev * (1.0 + min_rel_increase)))
}

/// Sets mean coordinates with `|μ_kj| < epsilon` to zero and renormalises.
/// Returns whether anything changed.
pub fn truncate_means(params: &mut MixtureParams, epsilon: f64) -> bool {
    let mut changed = false;
    for mut row in params.means.rows_mut() {
        let mut row_changed = false;
        for v in row.iter_mut() {
            if *v != 0.0 && v.abs() < epsilon {
                *v = 0.0;
                row_changed = true;
            }
        }
        if row_changed {
            linalg::normalize_in_place(row.as_slice_mut().expect("standard layout"));
            changed = true;
        }
    }
    changed
}

fn is_max_sparse(params: &MixtureParams) -> bool {
    (0..params.n_components()).all(|k| linalg::nnz(params.mean(k)) <= 1)
}

fn record(x: &Dataset, fit: FitResult, ebic_gamma: f64) -> Result<PathStep> {
    let ic = IcValues::for_fit(&fit, x.n_rows(), x.dim(), ebic_gamma)?;
    Ok(PathStep { beta: fit.beta, sparsity: sparsity(&fit.params), ic, fit })
}

/// Follows the path from `initial`, a usable fit at `β = 0`. EM failures end
/// the path; completed steps are kept and the failed fit is reported in
/// [`PathResult::failure`].
pub fn follow_path(x: &Dataset, k: usize, opts: &PathOptions, initial: &FitResult) -> Result<PathResult> {
    opts.validate()?;
    if !initial.status.is_usable() {
        return Err(Error::Config(format!("path needs a usable starting fit, got status {}", initial.status)));
    }
    if initial.params.n_components() != k {
        return Err(Error::DimensionMismatch { expected: k, got: initial.params.n_components() });
    }
    let mut steps = vec![record(x, initial.clone(), opts.ebic_gamma)?];
    let mut failure = None;
    let termination = loop {
        let prev = &steps.last().expect("nonempty").fit;
        if opts.stop_at_max_sparsity && is_max_sparse(&prev.params) {
            break Termination::MaxSparsity;
        }
        if steps.len() >= opts.max_steps {
            break Termination::MaxSteps;
        }
        let resp = e_step(x, &prev.params);
        let r = resultants(x, &resp.tau);
        let beta = match next_beta(&prev.params, &r, prev.beta, opts.min_rel_increase) {
            Ok(b) => b,
            Err(Error::NoIncrementAvailable) => break Termination::NoIncrementAvailable,
            Err(e) => return Err(e),
        };
        let fit_opts = FitOptions { beta, ..opts.fit.clone() };
        let mut fit = fit_em(x, k, &fit_opts, Some(&prev.params))?;
        if !fit.status.is_usable() {
            failure = Some(FailedStep { beta, fit });
            break Termination::EmFailure;
        }
        if truncate_means(&mut fit.params, opts.epsilon) {
            let resp = e_step(x, &fit.params);
            fit.log_likelihood = resp.log_likelihood;
            fit.penalized_log_likelihood = resp.log_likelihood - beta * fit.params.l1_penalty();
        }
        steps.push(record(x, fit, opts.ebic_gamma)?);
    };
    Ok(PathResult { steps, termination, failure })
}
