//! Text formats for observation matrices.
//!
//! - dense CSV: comma-separated values, one observation per line, with an
//!   optional header line (detected when the first line does not parse as
//!   numbers); lines starting with `#` are comments;
//! - sparse triplets: whitespace-separated `row col value` lines with 0-based
//!   indices; a `#shape N d` comment fixes the dimensions, otherwise they are
//!   inferred from the largest indices. Other `#` lines are comments.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{CsrMatrix, Dataset, Row};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    DenseCsv,
    SparseTriplet,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense-csv" | "csv" | "dense" => Ok(Format::DenseCsv),
            "sparse-triplet" | "triplet" | "sparse" => Ok(Format::SparseTriplet),
            other => Err(Error::Config(format!(
                "unknown matrix format {other:?} (expected dense-csv or sparse-triplet)"
            ))),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::DenseCsv => "dense-csv",
            Format::SparseTriplet => "sparse-triplet",
        })
    }
}

pub fn load_matrix(path: &Path, format: Format, normalize: bool) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let ds = match format {
        Format::DenseCsv => parse_dense_csv(&text)?,
        Format::SparseTriplet => parse_triplets(&text)?,
    };
    if normalize {
        ds.normalized()
    } else {
        Ok(ds)
    }
}

fn parse_numbers(line: &str) -> std::result::Result<Vec<f64>, String> {
    line.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>().map_err(|_| format!("not a number: {tok:?}"))
        })
        .collect()
}

pub fn parse_dense_csv(text: &str) -> Result<Dataset> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    let mut first_content = true;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed = parse_numbers(line);
        if first_content {
            first_content = false;
            if parsed.is_err() {
                // header line
                continue;
            }
        }
        let values = parsed.map_err(|message| Error::Parse { line: lineno + 1, message })?;
        if let Some(w) = width {
            if values.len() != w {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected {w} columns, found {}", values.len()),
                });
            }
        } else {
            width = Some(values.len());
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parse { line: lineno + 1, message: format!("non-finite value {bad}") });
        }
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 0, message: "no data rows".into() });
    }
    Dataset::from_rows(&rows)
}

pub fn parse_triplets(text: &str) -> Result<Dataset> {
    let mut shape: Option<(usize, usize)> = None;
    let mut triplets = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: lineno + 1, message };
        if let Some(comment) = line.strip_prefix('#') {
            let mut toks = comment.split_whitespace();
            if toks.next() == Some("shape") {
                let dims: Vec<&str> = toks.collect();
                if dims.len() != 2 {
                    return Err(err("shape comment must be '#shape N d'".into()));
                }
                let n = dims[0].parse().map_err(|_| err(format!("bad row count {:?}", dims[0])))?;
                let d = dims[1].parse().map_err(|_| err(format!("bad dimension {:?}", dims[1])))?;
                shape = Some((n, d));
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(err(format!("expected 'row col value', found {} fields", toks.len())));
        }
        let r: usize = toks[0].parse().map_err(|_| err(format!("bad row index {:?}", toks[0])))?;
        let c: usize = toks[1].parse().map_err(|_| err(format!("bad column index {:?}", toks[1])))?;
        let v: f64 = toks[2].parse().map_err(|_| err(format!("bad value {:?}", toks[2])))?;
        if !v.is_finite() {
            return Err(err(format!("non-finite value {v}")));
        }
        if let Some((n, d)) = shape {
            if r >= n || c >= d {
                return Err(err(format!("entry ({r}, {c}) outside declared shape {n}x{d}")));
            }
        }
        triplets.push((r, c, v));
    }
    let (n, d) = match shape {
        Some(s) => s,
        None => {
            let n = triplets.iter().map(|t| t.0 + 1).max().unwrap_or(0);
            let d = triplets.iter().map(|t| t.1 + 1).max().unwrap_or(0);
            (n, d)
        }
    };
    if n == 0 || d == 0 {
        return Err(Error::Parse { line: 0, message: "empty matrix".into() });
    }
    Ok(Dataset::from_sparse(CsrMatrix::from_triplets(n, d, &triplets)?))
}

/// Dense CSV rendering; floats use the shortest representation that
/// round-trips exactly.
pub fn dense_csv_string(ds: &Dataset) -> String {
    let d = ds.dim();
    let mut out = String::new();
    for row in ds.rows() {
        let dense = row.to_dense(d);
        let line: Vec<String> = dense.iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn triplet_string(ds: &Dataset) -> String {
    let mut out = format!("#shape {} {}\n", ds.n_rows(), ds.dim());
    for (i, row) in ds.rows().enumerate() {
        match row {
            Row::Dense(x) => {
                for (j, &v) in x.iter().enumerate().filter(|(_, v)| **v != 0.0) {
                    let _ = writeln!(out, "{i} {j} {v}");
                }
            }
            Row::Sparse { indices, values } => {
                for (&j, &v) in indices.iter().zip(values) {
                    let _ = writeln!(out, "{i} {j} {v}");
                }
            }
        }
    }
    out
}

pub fn write_dense_csv(ds: &Dataset, path: &Path) -> Result<()> {
    std::fs::write(path, dense_csv_string(ds)).map_err(|e| Error::io(path, e))
}

pub fn write_triplets(ds: &Dataset, path: &Path) -> Result<()> {
    std::fs::write(path, triplet_string(ds)).map_err(|e| Error::io(path, e))
}
