//! JSON persistence of fitted mixtures.
//!
//! Means are stored sparsely as `[index, value]` pairs. Floats are written
//! with the shortest representation that parses back to the same bits, so a
//! saved model reloads exactly.

use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::em::{FitResult, FitStatus, KappaMode, Kappas, MixtureParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KappaValue {
    Scalar(f64),
    Array(Vec<f64>),
}

pub type SparseRows = Vec<Vec<(usize, f64)>>;

pub fn sparse_rows(m: &Array2<f64>) -> SparseRows {
    m.rows()
        .into_iter()
        .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, &v)| (j, v)).collect())
        .collect()
}

pub fn dense_rows(rows: &SparseRows, d: usize) -> Result<Array2<f64>> {
    let mut m = Array2::zeros((rows.len(), d));
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in row {
            if j >= d {
                return Err(Error::Domain(format!("coordinate {j} outside dimension {d}")));
            }
            m[[i, j]] = v;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    #[serde(rename = "K")]
    pub k: usize,
    pub d: usize,
    pub kappa_mode: KappaMode,
    pub alpha: Vec<f64>,
    pub kappa: KappaValue,
    pub means: SparseRows,
    pub beta: f64,
    pub log_likelihood: f64,
    pub penalized_log_likelihood: f64,
    pub status: FitStatus,
    pub n_iters: usize,
    pub seed: u64,
    /// Hard assignments of the training observations, when recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
    /// Free-form provenance (invoking configuration, versions).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<serde_json::Value>,
}

impl ModelDocument {
    pub fn from_fit(fit: &FitResult, seed: u64) -> Self {
        let p = &fit.params;
        ModelDocument {
            k: p.n_components(),
            d: p.dim(),
            kappa_mode: p.kappa_mode(),
            alpha: p.alpha.clone(),
            kappa: match &p.kappas {
                Kappas::Free(v) => KappaValue::Array(v.clone()),
                Kappas::Shared(v) => KappaValue::Scalar(*v),
            },
            means: sparse_rows(&p.means),
            beta: fit.beta,
            log_likelihood: fit.log_likelihood,
            penalized_log_likelihood: fit.penalized_log_likelihood,
            status: fit.status,
            n_iters: fit.n_iters,
            seed,
            labels: None,
            run: None,
        }
    }

    pub fn params(&self) -> Result<MixtureParams> {
        if self.means.len() != self.k || self.alpha.len() != self.k {
            return Err(Error::Domain(format!("model lists disagree with K = {}", self.k)));
        }
        let kappas = match (&self.kappa, self.kappa_mode) {
            (KappaValue::Scalar(v), KappaMode::Shared) => Kappas::Shared(*v),
            (KappaValue::Array(v), KappaMode::Free) => Kappas::Free(v.clone()),
            _ => return Err(Error::Domain("kappa value does not match kappa_mode".into())),
        };
        MixtureParams::new(self.alpha.clone(), dense_rows(&self.means, self.d)?, kappas)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
