//! Spherical k-means: Lloyd iterations maximising the coherence
//! `Σ_i ⟨μ_{z_i}, x_i⟩`.

use ndarray::Array2;
use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::stream_rng;

const CHUNK_ROWS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct SkResult {
    /// `K × d`, unit rows.
    pub prototypes: Array2<f64>,
    pub labels: Vec<usize>,
    pub coherence: f64,
    /// Coherence after each prototype update.
    pub trace: Vec<f64>,
    pub n_iters: usize,
    pub converged: bool,
}

/// Best prototype per row (ties to the lowest index) and its inner product.
fn assign(x: &Dataset, prototypes: &Array2<f64>) -> Vec<(usize, f64)> {
    let n = x.n_rows();
    let k = prototypes.nrows();
    let mut out = vec![(0, 0.0); n];
    out.par_chunks_mut(CHUNK_ROWS).enumerate().for_each(|(c, chunk)| {
        let mut scores = vec![0.0; k];
        for (local, slot) in chunk.iter_mut().enumerate() {
            let row = x.row(c * CHUNK_ROWS + local);
            for (j, s) in scores.iter_mut().enumerate() {
                *s = row.dot(prototypes.row(j).as_slice().expect("standard layout"));
            }
            let j = linalg::argmax(&scores);
            *slot = (j, scores[j]);
        }
    });
    out
}

pub fn coherence(x: &Dataset, prototypes: &Array2<f64>, labels: &[usize]) -> f64 {
    labels
        .iter()
        .enumerate()
        .map(|(i, &z)| x.row(i).dot(prototypes.row(z).as_slice().expect("standard layout")))
        .sum()
}

/// Normalised cluster resultants. Empty clusters are reseeded with the
/// observation contributing least to the coherence, which moves to that
/// cluster; a vanishing resultant keeps the previous prototype.
fn update(x: &Dataset, labels: &mut [usize], scores: &mut [f64], prototypes: &mut Array2<f64>) {
    let k = prototypes.nrows();
    let d = x.dim();
    let mut counts = vec![0usize; k];
    for &z in labels.iter() {
        counts[z] += 1;
    }
    for j in 0..k {
        if counts[j] > 0 {
            continue;
        }
        // lowest contribution among points whose cluster can spare one
        let mut pick: Option<usize> = None;
        for i in 0..labels.len() {
            if counts[labels[i]] > 1 && pick.is_none_or(|p| scores[i] < scores[p]) {
                pick = Some(i);
            }
        }
        if let Some(i) = pick {
            counts[labels[i]] -= 1;
            counts[j] += 1;
            labels[i] = j;
            scores[i] = 1.0;
        }
    }
    let mut r = Array2::zeros((k, d));
    for (i, &z) in labels.iter().enumerate() {
        x.row(i).axpy(1.0, r.row_mut(z).as_slice_mut().expect("standard layout"));
    }
    for j in 0..k {
        let len = linalg::normalize_in_place(r.row_mut(j).as_slice_mut().expect("standard layout"));
        if len > 1e-12 {
            prototypes.row_mut(j).assign(&r.row(j));
        }
    }
}

pub fn skmeans_fit<R: Rng + ?Sized>(
    x: &Dataset,
    k: usize,
    max_iters: usize,
    rng: &mut R,
    init: Option<&Array2<f64>>,
) -> Result<SkResult> {
    let n = x.n_rows();
    if n < k || k == 0 {
        return Err(Error::TooFew { needed: k.max(1), got: n });
    }
    let mut prototypes = match init {
        Some(p) => {
            if p.dim() != (k, x.dim()) {
                return Err(Error::DimensionMismatch { expected: k * x.dim(), got: p.len() });
            }
            p.as_standard_layout().into_owned()
        }
        None => {
            let mut p = Array2::zeros((k, x.dim()));
            for (j, i) in index::sample(rng, n, k).into_iter().enumerate() {
                x.row(i).axpy(1.0, p.row_mut(j).as_slice_mut().expect("standard layout"));
            }
            p
        }
    };
    let mut labels: Option<Vec<usize>> = None;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut n_iters = 0;
    while n_iters < max_iters {
        let assigned = assign(x, &prototypes);
        let mut new_labels: Vec<usize> = assigned.iter().map(|a| a.0).collect();
        if labels.as_ref() == Some(&new_labels) {
            converged = true;
            break;
        }
        n_iters += 1;
        let mut scores: Vec<f64> = assigned.iter().map(|a| a.1).collect();
        update(x, &mut new_labels, &mut scores, &mut prototypes);
        trace.push(coherence(x, &prototypes, &new_labels));
        labels = Some(new_labels);
    }
    let labels = labels.unwrap_or_else(|| assign(x, &prototypes).into_iter().map(|a| a.0).collect());
    let coherence = coherence(x, &prototypes, &labels);
    Ok(SkResult { prototypes, labels, coherence, trace, n_iters, converged })
}

/// Highest-coherence run over `n_restarts` random starts; restart `r` uses
/// RNG stream `r` of `seed`.
pub fn skmeans_best_of(x: &Dataset, k: usize, max_iters: usize, seed: u64, n_restarts: usize) -> Result<SkResult> {
    let runs: Vec<Result<SkResult>> = (0..n_restarts.max(1) as u64)
        .into_par_iter()
        .map(|r| skmeans_fit(x, k, max_iters, &mut stream_rng(seed, r), None))
        .collect();
    let mut best: Option<SkResult> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.coherence > b.coherence) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}
