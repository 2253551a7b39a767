//! Agreement and sparsity scores.

use std::collections::BTreeMap;

use ndarray::Array2;
use rand::Rng;
use serde::Serialize;

use crate::dataset::{sample_mixture, Dataset, GroundTruth};
use crate::em::{e_step, hard_assign, MixtureParams};
use crate::error::{Error, Result};

fn choose2(n: u64) -> f64 {
    (n as f64) * (n as f64 - 1.0) / 2.0
}

/// Adjusted Rand index from the contingency table of two labelings.
///
/// Degenerate tables where the index is 0/0 (fewer than two observations,
/// or both partitions all-singletons or all-in-one) return 1, since the two
/// partitions are then identical.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let n = a.len() as u64;
    if n < 2 {
        return Ok(1.0);
    }
    let mut table: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| choose2(c)).sum();
    let sa: f64 = rows.values().map(|&c| choose2(c)).sum();
    let sb: f64 = cols.values().map(|&c| choose2(c)).sum();
    let expected = sa * sb / choose2(n);
    let max = 0.5 * (sa + sb);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

/// Fraction of exactly-zero mean coordinates.
pub fn sparsity(params: &MixtureParams) -> f64 {
    let zeros = params.means.iter().filter(|&&v| v == 0.0).count();
    zeros as f64 / params.means.len() as f64
}

/// Maximum-weight perfect matching on a square matrix (Hungarian method).
/// Returns `assignment[row] = column`.
pub fn max_weight_matching(weights: &Array2<f64>) -> Vec<usize> {
    let n = weights.nrows();
    assert_eq!(n, weights.ncols(), "matching needs a square matrix");
    // minimise the negated weights; 1-based potentials as in the classic
    // shortest augmenting path formulation
    let cost = |i: usize, j: usize| -weights[[i - 1, j - 1]];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportScores {
    /// Share of estimated zero coordinates that are planted zeros.
    pub precision: f64,
    /// Share of planted zero coordinates that the estimate zeroes.
    pub recall: f64,
    /// False when the estimate has no zero coordinates; precision is then
    /// reported as 1.
    pub precision_defined: bool,
    /// False when the truth has no zero coordinates; recall is then 1.
    pub recall_defined: bool,
    /// `matching[k]` is the true component aligned with estimated component `k`.
    pub matching: Vec<usize>,
}

/// Precision and recall of the zero coordinates of the estimated means,
/// after aligning components by the matching that maximises the summed
/// inner products `⟨μ̂_k, μ_l⟩`.
pub fn support_precision_recall(estimated: &MixtureParams, truth: &GroundTruth) -> Result<SupportScores> {
    let k = estimated.n_components();
    if truth.params.n_components() != k {
        return Err(Error::DimensionMismatch { expected: truth.params.n_components(), got: k });
    }
    if truth.params.dim() != estimated.dim() {
        return Err(Error::DimensionMismatch { expected: truth.params.dim(), got: estimated.dim() });
    }
    let similarity = estimated.means.dot(&truth.params.means.t());
    let matching = max_weight_matching(&similarity);
    let (mut est_zero, mut true_zero, mut both) = (0usize, 0usize, 0usize);
    for (e, &t) in matching.iter().enumerate() {
        for (mu, &planted) in estimated.means.row(e).iter().zip(truth.support_mask.row(t)) {
            let ez = *mu == 0.0;
            let tz = !planted;
            est_zero += ez as usize;
            true_zero += tz as usize;
            both += (ez && tz) as usize;
        }
    }
    let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    Ok(SupportScores {
        precision: ratio(both, est_zero),
        recall: ratio(both, true_zero),
        precision_defined: est_zero > 0,
        recall_defined: true_zero > 0,
        matching,
    })
}

/// Misclassification rate of crisp assignment under `truth`, on `n_samples`
/// labelled draws from `truth` itself.
pub fn estimate_overlap<R: Rng + ?Sized>(truth: &MixtureParams, n_samples: usize, rng: &mut R) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::TooFew { needed: 1, got: 0 });
    }
    let (x, labels) = sample_mixture(truth, n_samples, rng)?;
    let resp = e_step(&Dataset::from_dense(x), truth);
    let wrong = hard_assign(&resp.tau).iter().zip(&labels).filter(|(a, b)| a != b).count();
    Ok(wrong as f64 / n_samples as f64)
}
