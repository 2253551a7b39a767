//! Observation matrices on the unit sphere.
//!
//! A [`Dataset`] holds `N` observations in `R^d`, stored densely or as a
//! compressed sparse row matrix. Algorithms only touch rows through [`Row`],
//! which supports the two operations they need: an inner product with a dense
//! vector and a scaled accumulation into a dense vector.

mod io;
mod simulate;

use ndarray::Array2;

use crate::error::{Error, Result};

pub use io::{
    dense_csv_string, load_matrix, parse_dense_csv, parse_triplets, triplet_string, write_dense_csv,
    write_triplets, Format,
};
pub use simulate::{
    greedy_max_separation_indices, sample_mixture, zeroed_count,
    calibrate_overlap, greedy_max_separation, rescale_for_separability, simulate_mixture,
    sparsify_means, GroundTruth, GroundTruthDocument, Separation, SimulationConfig,
    CALIBRATION_KAPPA_RANGE,
};

/// Tolerance on `‖x_i‖₂ − 1` for rows accepted as unit vectors.
pub const UNIT_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a CSR matrix from `(row, col, value)` triplets. Duplicate
    /// coordinates are summed, explicit zeros are dropped.
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::Domain(format!(
                    "entry ({r}, {c}) outside a {n_rows}x{n_cols} matrix"
                )));
            }
            sorted.push((r, c, v));
        }
        sorted.sort_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0; n_rows + 1];
        let mut indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows = Vec::with_capacity(sorted.len());
        for (r, c, v) in sorted {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            last = Some((r, c));
            rows.push(r);
            indices.push(c);
            values.push(v);
        }
        // drop zeros (including duplicates that cancelled)
        let mut keep_rows = Vec::with_capacity(rows.len());
        let mut keep_idx = Vec::with_capacity(rows.len());
        let mut keep_val = Vec::with_capacity(rows.len());
        for ((r, c), v) in rows.into_iter().zip(indices).zip(values) {
            if v != 0.0 {
                keep_rows.push(r);
                keep_idx.push(c);
                keep_val.push(v);
            }
        }
        for &r in &keep_rows {
            indptr[r + 1] += 1;
        }
        for i in 0..n_rows {
            indptr[i + 1] += indptr[i];
        }
        Ok(CsrMatrix { n_rows, n_cols, indptr, indices: keep_idx, values: keep_val })
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    fn row(&self, i: usize) -> Row<'_> {
        let span = self.indptr[i]..self.indptr[i + 1];
        Row::Sparse { indices: &self.indices[span.clone()], values: &self.values[span] }
    }

    fn row_values_mut(&mut self, i: usize) -> &mut [f64] {
        let span = self.indptr[i]..self.indptr[i + 1];
        &mut self.values[span]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Storage {
    Dense(Array2<f64>),
    Sparse(CsrMatrix),
}

/// A borrowed observation.
#[derive(Debug, Clone, Copy)]
pub enum Row<'a> {
    Dense(&'a [f64]),
    Sparse { indices: &'a [usize], values: &'a [f64] },
}

impl Row<'_> {
    #[inline]
    pub fn dot(&self, v: &[f64]) -> f64 {
        match *self {
            Row::Dense(x) => crate::linalg::dot(x, v),
            Row::Sparse { indices, values } => {
                indices.iter().zip(values).map(|(&j, &x)| x * v[j]).sum()
            }
        }
    }

    /// `out += a · x`
    #[inline]
    pub fn axpy(&self, a: f64, out: &mut [f64]) {
        match *self {
            Row::Dense(x) => out.iter_mut().zip(x).for_each(|(o, &xi)| *o += a * xi),
            Row::Sparse { indices, values } => {
                for (&j, &x) in indices.iter().zip(values) {
                    out[j] += a * x;
                }
            }
        }
    }

    pub fn norm(&self) -> f64 {
        match *self {
            Row::Dense(x) => crate::linalg::norm(x),
            Row::Sparse { values, .. } => crate::linalg::norm(values),
        }
    }

    pub fn to_dense(&self, d: usize) -> Vec<f64> {
        let mut out = vec![0.0; d];
        self.axpy(1.0, &mut out);
        out
    }
}

/// `N` observations in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    storage: Storage,
    row_norms_applied: bool,
    row_ids: Option<Vec<String>>,
}

impl Dataset {
    pub fn from_dense(x: Array2<f64>) -> Self {
        let x = if x.is_standard_layout() { x } else { x.as_standard_layout().into_owned() };
        Dataset { storage: Storage::Dense(x), row_norms_applied: false, row_ids: None }
    }

    pub fn from_sparse(x: CsrMatrix) -> Self {
        Dataset { storage: Storage::Sparse(x), row_norms_applied: false, row_ids: None }
    }

    /// Builds a dense dataset from rows, which must all have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(rows.len() * d);
        for r in rows {
            if r.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: r.len() });
            }
            flat.extend_from_slice(r);
        }
        let x = Array2::from_shape_vec((rows.len(), d), flat).expect("shape checked");
        Ok(Self::from_dense(x))
    }

    pub fn with_row_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.n_rows() {
            return Err(Error::LengthMismatch { left: ids.len(), right: self.n_rows() });
        }
        self.row_ids = Some(ids);
        Ok(self)
    }

    pub fn row_ids(&self) -> Option<&[String]> {
        self.row_ids.as_deref()
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn row_norms_applied(&self) -> bool {
        self.row_norms_applied
    }

    pub fn n_rows(&self) -> usize {
        match &self.storage {
            Storage::Dense(x) => x.nrows(),
            Storage::Sparse(x) => x.n_rows,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.storage {
            Storage::Dense(x) => x.ncols(),
            Storage::Sparse(x) => x.n_cols,
        }
    }

    /// Fraction of non-zero entries.
    pub fn density(&self) -> f64 {
        let total = (self.n_rows() * self.dim()).max(1) as f64;
        let nnz = match &self.storage {
            Storage::Dense(x) => x.iter().filter(|&&v| v != 0.0).count(),
            Storage::Sparse(x) => x.nnz(),
        };
        nnz as f64 / total
    }

    #[inline]
    pub fn row(&self, i: usize) -> Row<'_> {
        match &self.storage {
            Storage::Dense(x) => Row::Dense(x.row(i).to_slice().expect("standard layout")),
            Storage::Sparse(x) => x.row(i),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = Row<'_>> + '_ {
        (0..self.n_rows()).map(move |i| self.row(i))
    }

    /// Scales every row to unit norm. Fails with [`Error::ZeroRow`] listing
    /// every all-zero row.
    pub fn normalized(mut self) -> Result<Self> {
        let zero: Vec<usize> = (0..self.n_rows()).filter(|&i| self.row(i).norm() == 0.0).collect();
        if !zero.is_empty() {
            return Err(Error::ZeroRow { rows: zero });
        }
        match &mut self.storage {
            Storage::Dense(x) => {
                for mut row in x.rows_mut() {
                    crate::linalg::normalize_in_place(row.as_slice_mut().expect("standard layout"));
                }
            }
            Storage::Sparse(x) => {
                for i in 0..x.n_rows {
                    crate::linalg::normalize_in_place(x.row_values_mut(i));
                }
            }
        }
        self.row_norms_applied = true;
        Ok(self)
    }

    /// Checks that every row has unit norm within [`UNIT_NORM_TOL`].
    pub fn check_unit_rows(&self) -> Result<()> {
        for i in 0..self.n_rows() {
            let norm = self.row(i).norm();
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::NotUnitNorm { row: i, norm });
            }
        }
        Ok(())
    }

    pub fn to_dense(&self) -> Array2<f64> {
        match &self.storage {
            Storage::Dense(x) => x.clone(),
            Storage::Sparse(_) => {
                let (n, d) = (self.n_rows(), self.dim());
                let mut out = Array2::zeros((n, d));
                for i in 0..n {
                    self.row(i).axpy(1.0, out.row_mut(i).as_slice_mut().unwrap());
                }
                out
            }
        }
    }

    /// Dataset restricted to the given rows, in that order.
    pub fn select_rows(&self, idx: &[usize]) -> Dataset {
        let d = self.dim();
        let storage = match &self.storage {
            Storage::Dense(x) => Storage::Dense(x.select(ndarray::Axis(0), idx)),
            Storage::Sparse(_) => {
                let mut triplets = Vec::new();
                for (new_i, &i) in idx.iter().enumerate() {
                    if let Row::Sparse { indices, values } = self.row(i) {
                        triplets.extend(indices.iter().zip(values).map(|(&j, &v)| (new_i, j, v)));
                    }
                }
                Storage::Sparse(CsrMatrix::from_triplets(idx.len(), d, &triplets).expect("in range"))
            }
        };
        Dataset {
            storage,
            row_norms_applied: self.row_norms_applied,
            row_ids: self.row_ids.as_ref().map(|ids| idx.iter().map(|&i| ids[i].clone()).collect()),
        }
    }
}
