//! Planted mixtures with sparse, well separated directional means.
//!
//! Generation order: uniform candidate directions, greedy selection of the
//! most separated `K`, random sparsification, a base concentration (given or
//! calibrated to a target overlap), Gaussian jitter per component, then a
//! rescaling of each concentration by how close its mean sits to the others.

use ndarray::Array2;
use rand::distr::weighted::WeightedIndex;
use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::em::{Kappas, MixtureParams};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::{stream_rng, streams};
use crate::vmf::{WoodSampler, KAPPA_CAP};

/// Search interval for the calibrated base concentration.
pub const CALIBRATION_KAPPA_RANGE: (f64, f64) = (0.01, 1e4);
const CALIBRATION_MAX_STEPS: usize = 40;
const SPARSIFY_MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Separation {
    /// Target misclassification rate of the true model, in `(0, 0.5)`.
    OverlapTarget(f64),
    BaseKappa(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub separation: Separation,
    /// Fraction of coordinates zeroed in each mean.
    pub sparsity: f64,
    /// Mixing proportions; balanced when absent.
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    #[serde(default = "default_jitter")]
    pub kappa_jitter_sd_frac: f64,
    #[serde(default = "default_multiplier")]
    pub candidate_multiplier: usize,
    #[serde(default = "default_calibration_samples")]
    pub calibration_samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_jitter() -> f64 {
    0.025
}
fn default_multiplier() -> usize {
    20
}
fn default_calibration_samples() -> usize {
    100_000
}

impl SimulationConfig {
    pub fn new(k: usize, d: usize, n: usize, separation: Separation) -> Self {
        SimulationConfig {
            k,
            d,
            n,
            separation,
            sparsity: 0.0,
            alpha: None,
            kappa_jitter_sd_frac: default_jitter(),
            candidate_multiplier: default_multiplier(),
            calibration_samples: default_calibration_samples(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.k == 0 || self.n == 0 {
            return bad("k and n must be >= 1".into());
        }
        if self.d < 2 {
            return bad(format!("d must be >= 2, got {}", self.d));
        }
        match self.separation {
            Separation::OverlapTarget(t) if !(t > 0.0 && t < 0.5) => {
                return bad(format!("overlap target must lie in (0, 0.5), got {t}"))
            }
            Separation::BaseKappa(k) if !(k > 0.0 && k.is_finite()) => {
                return bad(format!("base kappa must be positive, got {k}"))
            }
            _ => {}
        }
        if !(0.0..1.0).contains(&self.sparsity) {
            return bad(format!("sparsity must lie in [0, 1), got {}", self.sparsity));
        }
        if let Some(a) = &self.alpha {
            if a.len() != self.k {
                return bad(format!("alpha has {} entries for k = {}", a.len(), self.k));
            }
            if a.iter().any(|v| !(*v >= 0.0)) || (a.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
                return bad("alpha must be nonnegative and sum to 1".into());
            }
        }
        if !(self.kappa_jitter_sd_frac >= 0.0) {
            return bad("kappa_jitter_sd_frac must be >= 0".into());
        }
        if self.candidate_multiplier == 0 || self.calibration_samples == 0 {
            return bad("candidate_multiplier and calibration_samples must be >= 1".into());
        }
        Ok(())
    }

    pub fn alpha(&self) -> Vec<f64> {
        self.alpha.clone().unwrap_or_else(|| vec![1.0 / self.k as f64; self.k])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub params: MixtureParams,
    /// 0-based component per observation.
    pub labels: Vec<usize>,
    /// `true` where the planted mean coordinate is non-zero.
    pub support_mask: Array2<bool>,
    pub base_kappa: f64,
}

impl GroundTruth {
    pub fn new(params: MixtureParams, labels: Vec<usize>, base_kappa: f64) -> Self {
        let support_mask = params.means.mapv(|v| v != 0.0);
        GroundTruth { params, labels, support_mask, base_kappa }
    }
}

/// On-disk form of a [`GroundTruth`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthDocument {
    #[serde(rename = "K")]
    pub k: usize,
    pub d: usize,
    pub alpha: Vec<f64>,
    pub kappa: Vec<f64>,
    pub base_kappa: f64,
    /// Per component, `[index, value]` for each non-zero coordinate.
    pub mu: Vec<Vec<(usize, f64)>>,
    pub labels: Vec<usize>,
    pub seed: u64,
    pub config: Option<SimulationConfig>,
}

impl GroundTruthDocument {
    pub fn from_truth(truth: &GroundTruth, seed: u64, config: Option<SimulationConfig>) -> Self {
        let p = &truth.params;
        GroundTruthDocument {
            k: p.n_components(),
            d: p.dim(),
            alpha: p.alpha.clone(),
            kappa: p.kappas.expand(p.n_components()),
            base_kappa: truth.base_kappa,
            mu: p
                .means
                .rows()
                .into_iter()
                .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, &v)| (j, v)).collect())
                .collect(),
            labels: truth.labels.clone(),
            seed,
            config,
        }
    }

    pub fn to_truth(&self) -> Result<GroundTruth> {
        if self.mu.len() != self.k || self.kappa.len() != self.k {
            return Err(Error::Domain("ground truth lists disagree with K".into()));
        }
        let mut means = Array2::zeros((self.k, self.d));
        for (i, coords) in self.mu.iter().enumerate() {
            for &(j, v) in coords {
                if j >= self.d {
                    return Err(Error::Domain(format!("mean coordinate {j} outside dimension {}", self.d)));
                }
                means[[i, j]] = v;
            }
        }
        if let Some(&bad) = self.labels.iter().find(|&&l| l >= self.k) {
            return Err(Error::Domain(format!("label {bad} outside 0..{}", self.k)));
        }
        let params = MixtureParams::new(self.alpha.clone(), means, Kappas::Free(self.kappa.clone()))?;
        Ok(GroundTruth::new(params, self.labels.clone(), self.base_kappa))
    }
}

/// Indices of `k` mutually separated candidates, in selection order: first
/// the pair with the smallest inner product, then repeatedly the candidate
/// whose largest inner product with the selection is smallest. Ties go to
/// the lowest index.
pub fn greedy_max_separation_indices(candidates: &Array2<f64>, k: usize) -> Result<Vec<usize>> {
    let m = candidates.nrows();
    if m < k || k == 0 {
        return Err(Error::TooFew { needed: k.max(1), got: m });
    }
    if k == 1 {
        return Ok(vec![0]);
    }
    let gram = candidates.dot(&candidates.t());
    let mut best = (0, 1);
    for i in 0..m {
        for j in i + 1..m {
            if gram[[i, j]] < gram[[best.0, best.1]] {
                best = (i, j);
            }
        }
    }
    let mut chosen = vec![best.0, best.1];
    let mut taken = vec![false; m];
    taken[best.0] = true;
    taken[best.1] = true;
    let mut worst: Vec<f64> = (0..m).map(|c| gram[[c, best.0]].max(gram[[c, best.1]])).collect();
    while chosen.len() < k {
        let mut pick = None;
        for c in 0..m {
            if !taken[c] && pick.is_none_or(|p: usize| worst[c] < worst[p]) {
                pick = Some(c);
            }
        }
        let p = pick.expect("m >= k");
        taken[p] = true;
        chosen.push(p);
        for c in 0..m {
            worst[c] = worst[c].max(gram[[c, p]]);
        }
    }
    Ok(chosen)
}

pub fn greedy_max_separation(candidates: &Array2<f64>, k: usize) -> Result<Array2<f64>> {
    let idx = greedy_max_separation_indices(candidates, k)?;
    Ok(candidates.select(ndarray::Axis(0), &idx))
}

/// Number of coordinates zeroed per mean.
pub fn zeroed_count(d: usize, sparsity: f64) -> usize {
    // the small offset keeps e.g. 0.15 * 100 from flooring to 14
    ((sparsity * d as f64) + 1e-9).floor() as usize
}

/// Zeroes `⌊sparsity·d⌋` random coordinates of every mean and renormalises.
/// Draws again when a mean vanishes or two means coincide.
pub fn sparsify_means<R: Rng + ?Sized>(means: &Array2<f64>, sparsity: f64, rng: &mut R) -> Result<Array2<f64>> {
    let (k, d) = means.dim();
    let zeros = zeroed_count(d, sparsity);
    if zeros >= d {
        return Err(Error::CannotSparsify { attempts: 0 });
    }
    'attempt: for _ in 0..SPARSIFY_MAX_ATTEMPTS {
        let mut out = means.as_standard_layout().into_owned();
        for mut row in out.rows_mut() {
            for j in index::sample(rng, d, zeros) {
                row[j] = 0.0;
            }
            if linalg::normalize_in_place(row.as_slice_mut().expect("standard layout")) == 0.0 {
                continue 'attempt;
            }
        }
        for a in 0..k {
            for b in a + 1..k {
                if out.row(a) == out.row(b) {
                    continue 'attempt;
                }
            }
        }
        return Ok(out);
    }
    Err(Error::CannotSparsify { attempts: SPARSIFY_MAX_ATTEMPTS })
}

/// `κ'_k = 2κ_k / (1 − c_k)` with `c_k` the largest inner product between
/// `μ_k` and another mean (`c_k = 0` for a single component), capped at
/// [`KAPPA_CAP`].
pub fn rescale_for_separability(means: &Array2<f64>, kappas: &[f64]) -> Vec<f64> {
    let k = means.nrows();
    (0..k)
        .map(|a| {
            let c = (0..k)
                .filter(|&b| b != a)
                .map(|b| means.row(a).dot(&means.row(b)))
                .fold(f64::NEG_INFINITY, f64::max);
            let c = if k == 1 { 0.0 } else { c };
            let scaled = 2.0 * kappas[a] / (1.0 - c);
            if scaled.is_finite() { scaled.min(KAPPA_CAP) } else { KAPPA_CAP }
        })
        .collect()
}

/// Labelled draws from a mixture: labels from `α`, then one vMF draw each.
pub fn sample_mixture<R: Rng + ?Sized>(params: &MixtureParams, n: usize, rng: &mut R) -> Result<(Array2<f64>, Vec<usize>)> {
    let k = params.n_components();
    let d = params.dim();
    let samplers = (0..k).map(|j| WoodSampler::new(d, params.kappa(j))).collect::<Result<Vec<_>>>()?;
    let labels_dist = WeightedIndex::new(&params.alpha).map_err(|e| Error::Domain(e.to_string()))?;
    let mut x = Array2::zeros((n, d));
    let mut labels = Vec::with_capacity(n);
    for mut row in x.rows_mut() {
        let z = labels_dist.sample(rng);
        samplers[z].sample_into(params.mean(z), rng, row.as_slice_mut().expect("standard layout"));
        labels.push(z);
    }
    Ok((x, labels))
}

/// Mixture with every component at base concentration `kappa` before the
/// separability rescaling (no jitter).
fn unjittered(means: &Array2<f64>, alpha: &[f64], kappa: f64) -> Result<MixtureParams> {
    let kappas = rescale_for_separability(means, &vec![kappa; means.nrows()]);
    MixtureParams::new(alpha.to_vec(), means.clone(), Kappas::Free(kappas))
}

/// Base concentration whose un-jittered, rescaled mixture misclassifies
/// about `target` of its own samples under crisp assignment.
///
/// Bisection on `log κ` over [`CALIBRATION_KAPPA_RANGE`]; every trial draws
/// `samples` observations from a clone of `rng`, so all trials share the same
/// random numbers (`rng` itself is not advanced). Stops once `|error − target| < 0.1·target`, or after 40
/// steps.
pub fn calibrate_overlap<R: Rng + Clone>(
    means: &Array2<f64>,
    target: f64,
    alpha: &[f64],
    samples: usize,
    rng: &R,
) -> Result<f64> {
    if !(target > 0.0 && target < 0.5) {
        return Err(Error::Domain(format!("overlap target must lie in (0, 0.5), got {target}")));
    }
    let error_at = |kappa: f64| -> Result<f64> {
        let params = unjittered(means, alpha, kappa)?;
        crate::metrics::estimate_overlap(&params, samples, &mut rng.clone())
    };
    let (mut lo, mut hi) = CALIBRATION_KAPPA_RANGE;
    let (e_lo, e_hi) = (error_at(lo)?, error_at(hi)?);
    let close = |e: f64| (e - target).abs() < 0.1 * target;
    if close(e_lo) {
        return Ok(lo);
    }
    if close(e_hi) {
        return Ok(hi);
    }
    if !(e_lo > target && e_hi < target) {
        return Err(Error::NotBracketed { target, lo, hi });
    }
    let mut mid = (lo * hi).sqrt();
    for _ in 0..CALIBRATION_MAX_STEPS {
        mid = (lo * hi).sqrt();
        let e = error_at(mid)?;
        if close(e) {
            break;
        }
        if e > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Uniform directions on `S^{d-1}`, one per row.
fn uniform_directions<R: Rng + ?Sized>(m: usize, d: usize, rng: &mut R) -> Array2<f64> {
    let mut out = Array2::zeros((m, d));
    for mut row in out.rows_mut() {
        loop {
            row.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
            if linalg::normalize_in_place(row.as_slice_mut().expect("standard layout")) > 0.0 {
                break;
            }
        }
    }
    out
}

/// Jittered concentrations `N(κ, (fκ)²)`, redrawn until positive.
fn jitter<R: Rng + ?Sized>(kappa: f64, frac: f64, k: usize, rng: &mut R) -> Result<Vec<f64>> {
    if frac == 0.0 {
        return Ok(vec![kappa; k]);
    }
    let normal = Normal::new(kappa, frac * kappa).map_err(|e| Error::Domain(e.to_string()))?;
    Ok((0..k)
        .map(|_| loop {
            let v = normal.sample(rng);
            if v > 0.0 {
                break v;
            }
        })
        .collect())
}

/// Generates a dataset and its planted structure. Each stage draws from its
/// own RNG stream derived from `cfg.seed`.
pub fn simulate_mixture(cfg: &SimulationConfig) -> Result<(Dataset, GroundTruth)> {
    cfg.validate()?;
    let alpha = cfg.alpha();
    let mut rng = stream_rng(cfg.seed, streams::SIM_CANDIDATES);
    let candidates = uniform_directions(cfg.candidate_multiplier * cfg.k, cfg.d, &mut rng);
    let separated = greedy_max_separation(&candidates, cfg.k)?;
    let means = sparsify_means(&separated, cfg.sparsity, &mut stream_rng(cfg.seed, streams::SIM_SPARSIFY))?;
    let base_kappa = match cfg.separation {
        Separation::BaseKappa(k) => k,
        Separation::OverlapTarget(t) => calibrate_overlap(
            &means,
            t,
            &alpha,
            cfg.calibration_samples,
            &stream_rng(cfg.seed, streams::SIM_CALIBRATION),
        )?,
    };
    let jittered = jitter(base_kappa, cfg.kappa_jitter_sd_frac, cfg.k, &mut stream_rng(cfg.seed, streams::SIM_JITTER))?;
    let kappas = rescale_for_separability(&means, &jittered);
    let params = MixtureParams::new(alpha, means, Kappas::Free(kappas))?;
    let (x, labels) = sample_mixture(&params, cfg.n, &mut stream_rng(cfg.seed, streams::SIM_SAMPLES))?;
    let mut ds = Dataset::from_dense(x);
    ds.row_norms_applied = true;
    Ok((ds, GroundTruth::new(params, labels, base_kappa)))
}
