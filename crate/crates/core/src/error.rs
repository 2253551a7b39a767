use thiserror::Error;

use crate::em::FitStatus;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("row {row} is not unit-norm (norm = {norm})")]
    NotUnitNorm { row: usize, norm: f64 },

    #[error("weighted resultant vanishes, directional mean is undefined")]
    ZeroResultant,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("rows with zero norm cannot be normalized: {rows:?}")]
    ZeroRow { rows: Vec<usize> },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("need at least {needed} items, got {got}")]
    TooFew { needed: usize, got: usize },

    #[error("could not produce distinct non-zero sparse means after {attempts} attempts")]
    CannotSparsify { attempts: usize },

    #[error("overlap target {target} is not bracketed for base kappa in [{lo}, {hi}]")]
    NotBracketed { target: f64, lo: f64, hi: f64 },

    #[error("initialisation failed after {attempts} attempts: {reason}")]
    InitFailure { attempts: usize, reason: String },

    /// EM-internal failure of a single component; mapped onto a [`FitStatus`].
    #[error("EM failure in component {component}: {status:?}")]
    Em { status: FitStatus, component: usize },

    #[error("every restart failed: {outcomes:?}")]
    AllRestartsFailed { outcomes: Vec<String> },

    #[error("no penalty increment available: every kappa*|r| is at or below the current beta")]
    NoIncrementAvailable,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
