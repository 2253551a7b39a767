//! Information criteria and the two-stage choice of `K` and `β`.
//!
//! Every criterion has the form `φ(n, d)·C − 2 log L`, where `log L` is the
//! unpenalised observed log-likelihood and `C` counts free parameters. A unit
//! mean with `m` non-zero coordinates has `max(1, m − 1)` free parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::em::{fit_best_of, FitResult, KappaMode, MixtureParams};
use crate::error::{Error, Result};
use crate::path::{follow_path, PathOptions, PathResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CriterionKind {
    #[serde(rename = "AIC")]
    Aic,
    #[serde(rename = "BIC")]
    Bic,
    #[serde(rename = "RIC")]
    Ric,
    #[serde(rename = "RICc")]
    Ricc,
    #[serde(rename = "EBIC")]
    Ebic,
}

impl CriterionKind {
    pub const ALL: [CriterionKind; 5] =
        [CriterionKind::Aic, CriterionKind::Bic, CriterionKind::Ric, CriterionKind::Ricc, CriterionKind::Ebic];

    pub fn name(self) -> &'static str {
        match self {
            CriterionKind::Aic => "AIC",
            CriterionKind::Bic => "BIC",
            CriterionKind::Ric => "RIC",
            CriterionKind::Ricc => "RICc",
            CriterionKind::Ebic => "EBIC",
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CriterionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CriterionKind::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown criterion {s:?} (expected AIC, BIC, RIC, RICc or EBIC)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub kind: CriterionKind,
    pub ebic_gamma: f64,
}

pub const DEFAULT_EBIC_GAMMA: f64 = 0.5;

impl Criterion {
    pub fn new(kind: CriterionKind) -> Self {
        Criterion { kind, ebic_gamma: DEFAULT_EBIC_GAMMA }
    }

    /// The coefficient `φ(n, d)` multiplying the parameter count.
    pub fn coefficient(&self, n: f64, d: f64) -> Result<f64> {
        let domain = |m: String| Err(Error::Domain(m));
        if !(0.0..=1.0).contains(&self.ebic_gamma) {
            return domain(format!("EBIC gamma must lie in [0, 1], got {}", self.ebic_gamma));
        }
        if matches!(self.kind, CriterionKind::Bic | CriterionKind::Ebic) && !(n > 0.0) {
            return domain(format!("{} needs n > 0, got {n}", self.kind));
        }
        if matches!(self.kind, CriterionKind::Ric | CriterionKind::Ebic) && !(d > 1.0) {
            return domain(format!("{} needs d > 1, got {d}", self.kind));
        }
        if self.kind == CriterionKind::Ricc && !(d >= 3.0) {
            return domain(format!("RICc needs d >= 3, got {d}"));
        }
        Ok(match self.kind {
            CriterionKind::Aic => 2.0,
            CriterionKind::Bic => n.ln(),
            CriterionKind::Ric => 2.0 * d.ln(),
            CriterionKind::Ricc => 2.0 * (d.ln() + d.ln().ln()),
            CriterionKind::Ebic => n.ln() + 2.0 * self.ebic_gamma * d.ln(),
        })
    }

    /// `φ(n, d)·C − 2 log L`
    pub fn evaluate(&self, log_likelihood: f64, free_params: usize, n: f64, d: f64) -> Result<f64> {
        Ok(self.coefficient(n, d)? * free_params as f64 - 2.0 * log_likelihood)
    }
}

/// Free parameters of a unit mean: `max(1, nnz − 1)`.
pub fn mean_free_params(mu: &[f64]) -> usize {
    crate::linalg::nnz(mu).saturating_sub(1).max(1)
}

/// `K − 1` proportions, `K` concentrations (or one when shared) and the
/// per-mean counts.
pub fn count_free_params(params: &MixtureParams) -> usize {
    let k = params.n_components();
    let kappa = match params.kappa_mode() {
        KappaMode::Free => k,
        KappaMode::Shared => 1,
    };
    let means: usize = (0..k).map(|j| mean_free_params(params.mean(j))).sum();
    (k - 1) + kappa + means
}

pub fn information_criterion(fit: &FitResult, n: usize, d: usize, c: &Criterion) -> Result<f64> {
    c.evaluate(fit.log_likelihood, count_free_params(&fit.params), n as f64, d as f64)
}

/// All five criteria for one model; RICc is absent when `d < 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcValues {
    #[serde(rename = "AIC")]
    pub aic: f64,
    #[serde(rename = "BIC")]
    pub bic: f64,
    #[serde(rename = "RIC")]
    pub ric: f64,
    #[serde(rename = "RICc")]
    pub ricc: Option<f64>,
    #[serde(rename = "EBIC")]
    pub ebic: f64,
}

impl IcValues {
    pub fn compute(log_likelihood: f64, free_params: usize, n: usize, d: usize, ebic_gamma: f64) -> Result<Self> {
        let (n, d) = (n as f64, d as f64);
        let eval = |kind| Criterion { kind, ebic_gamma }.evaluate(log_likelihood, free_params, n, d);
        Ok(IcValues {
            aic: eval(CriterionKind::Aic)?,
            bic: eval(CriterionKind::Bic)?,
            ric: eval(CriterionKind::Ric)?,
            ricc: eval(CriterionKind::Ricc).ok(),
            ebic: eval(CriterionKind::Ebic)?,
        })
    }

    pub fn for_fit(fit: &FitResult, n: usize, d: usize, ebic_gamma: f64) -> Result<Self> {
        Self::compute(fit.log_likelihood, count_free_params(&fit.params), n, d, ebic_gamma)
    }

    pub fn get(&self, kind: CriterionKind) -> Option<f64> {
        match kind {
            CriterionKind::Aic => Some(self.aic),
            CriterionKind::Bic => Some(self.bic),
            CriterionKind::Ric => Some(self.ric),
            CriterionKind::Ricc => self.ricc,
            CriterionKind::Ebic => Some(self.ebic),
        }
    }
}

/// Position of the smallest value; ties go to the earliest.
fn argmin(values: impl Iterator<Item = Option<f64>>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        if let Some(v) = v {
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Index of the recorded path step minimising `kind`.
pub fn best_step(path: &PathResult, kind: CriterionKind) -> Option<usize> {
    argmin(path.steps.iter().map(|s| s.ic.get(kind)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionConfig {
    pub k_candidates: Vec<usize>,
    pub n_restarts: usize,
    /// Chooses `K` on the dense fits.
    pub k_criterion: CriterionKind,
    /// Chooses `β` along the path of the selected `K`.
    pub beta_criterion: CriterionKind,
    pub path: PathOptions,
}

/// Everything computed for one candidate `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct KCandidate {
    pub k: usize,
    pub dense: Option<FitResult>,
    pub dense_ic: Option<IcValues>,
    pub path: Option<PathResult>,
    /// Best path step per criterion.
    pub best_steps: BTreeMap<CriterionKind, usize>,
    /// Why this `K` was dropped, if it was.
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    pub candidates: Vec<KCandidate>,
    /// Selected `K` per criterion, from the dense fits.
    pub k_star: BTreeMap<CriterionKind, usize>,
    pub k_criterion: CriterionKind,
    pub beta_criterion: CriterionKind,
    /// `(K*, step index)` of the final model.
    pub final_choice: Option<(usize, usize)>,
}

impl SelectionReport {
    pub fn candidate(&self, k: usize) -> Option<&KCandidate> {
        self.candidates.iter().find(|c| c.k == k)
    }

    pub fn final_fit(&self) -> Option<&FitResult> {
        let (k, step) = self.final_choice?;
        Some(&self.candidate(k)?.path.as_ref()?.steps[step].fit)
    }
}

fn run_candidate(x: &Dataset, k: usize, cfg: &SelectionConfig) -> KCandidate {
    let mut out = KCandidate {
        k,
        dense: None,
        dense_ic: None,
        path: None,
        best_steps: BTreeMap::new(),
        skipped: None,
    };
    let mut fit_opts = cfg.path.fit.clone();
    fit_opts.beta = 0.0;
    let dense = match fit_best_of(x, k, &fit_opts, cfg.n_restarts) {
        Ok(f) => f,
        Err(e) => {
            out.skipped = Some(e.to_string());
            return out;
        }
    };
    match IcValues::for_fit(&dense, x.n_rows(), x.dim(), cfg.path.ebic_gamma) {
        Ok(ic) => out.dense_ic = Some(ic),
        Err(e) => {
            out.skipped = Some(e.to_string());
            return out;
        }
    }
    match follow_path(x, k, &cfg.path, &dense) {
        Ok(path) => {
            for kind in CriterionKind::ALL {
                if let Some(i) = best_step(&path, kind) {
                    out.best_steps.insert(kind, i);
                }
            }
            out.path = Some(path);
        }
        Err(e) => out.skipped = Some(e.to_string()),
    }
    out.dense = Some(dense);
    out
}

/// For each candidate `K`: best dense fit over restarts, full path, best
/// step per criterion. `K*` is chosen on the dense fits; the final model is
/// the best step of `K*`'s path under the `β` criterion.
pub fn select_model(x: &Dataset, cfg: &SelectionConfig) -> Result<SelectionReport> {
    if cfg.k_candidates.is_empty() {
        return Err(Error::Config("no candidate K given".into()));
    }
    if cfg.k_candidates.contains(&0) {
        return Err(Error::Config("K must be >= 1".into()));
    }
    cfg.path.validate()?;
    let candidates: Vec<KCandidate> = cfg.k_candidates.par_iter().map(|&k| run_candidate(x, k, cfg)).collect();
    let mut k_star = BTreeMap::new();
    for kind in CriterionKind::ALL {
        let usable = || candidates.iter().filter(|c| c.path.is_some());
        if let Some(i) = argmin(usable().map(|c| c.dense_ic.and_then(|ic| ic.get(kind)))) {
            k_star.insert(kind, usable().nth(i).expect("index in range").k);
        }
    }
    let final_choice = k_star.get(&cfg.k_criterion).and_then(|&k| {
        let cand = candidates.iter().find(|c| c.k == k)?;
        Some((k, *cand.best_steps.get(&cfg.beta_criterion)?))
    });
    Ok(SelectionReport {
        candidates,
        k_star,
        k_criterion: cfg.k_criterion,
        beta_criterion: cfg.beta_criterion,
        final_choice,
    })
}
