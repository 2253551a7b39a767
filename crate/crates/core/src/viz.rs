//! Orderings and pixel maps of sparse means and of the data they describe.
//!
//! Dimensions are sorted by how many means use them (`n_j`, descending),
//! then by their binary support column read down the components in
//! decreasing-`α` order (a 1 sorts before a 0), then by `Σ_k |μ_kj|`
//! descending. Each group of dimensions sharing an `n_j` gets its own hue.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use crate::em::MixtureParams;
use crate::error::{Error, Result};

/// Bumped whenever the palette or the intensity mapping changes.
pub const PALETTE_VERSION: u32 = 1;

/// Twelve evenly spaced hues at full saturation.
pub const PALETTE: [[u8; 3]; 12] = [
    [230, 25, 25],
    [230, 128, 25],
    [230, 230, 25],
    [128, 230, 25],
    [25, 230, 25],
    [25, 230, 128],
    [25, 230, 230],
    [25, 128, 230],
    [25, 25, 230],
    [128, 25, 230],
    [230, 25, 230],
    [230, 25, 128],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionOrdering {
    /// `perm[position]` is the original dimension shown at `position`.
    pub perm: Vec<usize>,
    /// Group id per original dimension; 0 is the most shared `n_j`.
    pub group_of: Vec<usize>,
    /// `n_j` per original dimension.
    pub n: Vec<usize>,
}

impl DimensionOrdering {
    /// Companion table: `original_dim,position,group_id,n_j`, rows in
    /// display order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("original_dim,position,group_id,n_j\n");
        for (pos, &j) in self.perm.iter().enumerate() {
            let _ = writeln!(out, "{j},{pos},{},{}", self.group_of[j], self.n[j]);
        }
        out
    }
}

/// Component order by `α` descending, ties by index.
pub fn order_components(alpha: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..alpha.len()).collect();
    idx.sort_by(|&a, &b| alpha[b].total_cmp(&alpha[a]));
    idx
}

/// Observations grouped by cluster in component order, original order
/// within a cluster.
pub fn order_data_rows(labels: &[usize], alpha: &[f64]) -> Vec<usize> {
    let mut rank = vec![0; alpha.len()];
    for (pos, &k) in order_components(alpha).iter().enumerate() {
        rank[k] = pos;
    }
    let mut idx: Vec<usize> = (0..labels.len()).collect();
    idx.sort_by_key(|&i| rank[labels[i]]);
    idx
}

/// `b_kj = 1{|μ_kj| > epsilon}`
pub fn binary_support(params: &MixtureParams, epsilon: f64) -> Array2<bool> {
    params.means.mapv(|v| v.abs() > epsilon)
}

pub fn order_dimensions(params: &MixtureParams, epsilon: f64) -> DimensionOrdering {
    let b = binary_support(params, epsilon);
    let d = params.dim();
    let rows = order_components(&params.alpha);
    let n: Vec<usize> = (0..d).map(|j| b.column(j).iter().filter(|&&v| v).count()).collect();
    let mass: Vec<f64> = (0..d).map(|j| params.means.column(j).iter().map(|v| v.abs()).sum()).collect();
    let cmp = |&a: &usize, &c: &usize| -> Ordering {
        n[c].cmp(&n[a])
            .then_with(|| {
                for &k in &rows {
                    match (b[[k, a]], b[[k, c]]) {
                        (true, false) => return Ordering::Less,
                        (false, true) => return Ordering::Greater,
                        _ => {}
                    }
                }
                Ordering::Equal
            })
            .then_with(|| mass[c].total_cmp(&mass[a]))
    };
    let mut perm: Vec<usize> = (0..d).collect();
    perm.sort_by(cmp);
    let mut distinct: Vec<usize> = n.clone();
    distinct.sort_unstable_by(|a, b| b.cmp(a));
    distinct.dedup();
    let group_of = n.iter().map(|v| distinct.iter().position(|x| x == v).expect("present")).collect();
    DimensionOrdering { perm, group_of, n }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    Means,
    Data,
}

impl std::fmt::Display for RenderMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RenderMode::Means => "means",
            RenderMode::Data => "data",
        })
    }
}

/// Binary PPM (P6) of `matrix` with rows in `row_perm` order and columns in
/// `dims.perm` order. Each pixel blends white towards the hue of its
/// column's group in proportion to `|value| / max |value|`; `scale` repeats
/// every pixel in a `scale × scale` block.
pub fn render_pixel_map(
    matrix: &Array2<f64>,
    dims: &DimensionOrdering,
    row_perm: &[usize],
    mode: RenderMode,
    scale: usize,
) -> Result<Vec<u8>> {
    let d = matrix.ncols();
    if dims.perm.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: dims.perm.len() });
    }
    if let Some(&bad) = row_perm.iter().find(|&&i| i >= matrix.nrows()) {
        return Err(Error::Domain(format!("row {bad} outside a {}-row matrix", matrix.nrows())));
    }
    if scale == 0 {
        return Err(Error::Config("scale must be >= 1".into()));
    }
    let max = matrix.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (w, h) = (d * scale, row_perm.len() * scale);
    let mut out = format!("P6\n# palette v{PALETTE_VERSION} max {max:e} mode {mode}\n{w} {h}\n255\n").into_bytes();
    out.reserve(w * h * 3);
    let mut line = Vec::with_capacity(w * 3);
    for &i in row_perm {
        line.clear();
        for &j in &dims.perm {
            let t = if max > 0.0 { matrix[[i, j]].abs() / max } else { 0.0 };
            let hue = PALETTE[dims.group_of[j] % PALETTE.len()];
            let px = hue.map(|c| (255.0 + t * (c as f64 - 255.0)).round() as u8);
            for _ in 0..scale {
                line.extend_from_slice(&px);
            }
        }
        for _ in 0..scale {
            out.extend_from_slice(&line);
        }
    }
    Ok(out)
}

pub fn write_pixel_map(bytes: &[u8], path: &Path) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
