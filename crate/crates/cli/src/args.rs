//! Command-line flags. Every flag is optional so that unset flags fall
//! through to the config file and then to the defaults in `settings`; field
//! names match the configuration keys.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "smovmf", version, about = "Sparse von Mises-Fisher mixture clustering")]
pub struct Cli {
    /// Configuration file: a JSON object or `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a dataset with planted sparse structure.
    Simulate(SimulateFlags),
    /// Fit a mixture at one penalty level.
    Fit(FitFlags),
    /// Follow the regularisation path from a dense fit.
    Path(PathFlags),
    /// Choose K on dense fits, then the penalty along its path.
    Select(SelectFlags),
    /// Spherical k-means baseline.
    Skmeans(SkmeansFlags),
    /// Pixel maps of a model's means and, optionally, of the data.
    Viz(VizFlags),
    /// Compare a model against a simulated ground truth.
    Metrics(MetricsFlags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Fit(_) => "fit",
            Command::Path(_) => "path",
            Command::Select(_) => "select",
            Command::Skmeans(_) => "skmeans",
            Command::Viz(_) => "viz",
            Command::Metrics(_) => "metrics",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct InputFlags {
    /// Observation matrix.
    #[arg(long, short)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    /// dense-csv or sparse-triplet.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    /// Scale rows to unit norm instead of rejecting non-unit rows.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalize: Option<bool>,
}

#[derive(Debug, Args, Serialize)]
pub struct EmFlags {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    /// free or shared.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_mode: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_em_iters: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub em_tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param_tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_max_iters: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_cap: Option<f64>,
    /// Solve for κ exactly instead of using the closed-form approximation.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine_kappa: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_init_attempts: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct PathKnobs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    /// Mean coordinates below this magnitude are zeroed after each step.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_rel_increase: Option<f64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_at_max_sparsity: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ebic_gamma: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateFlags {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Base concentration; exclusive with --overlap.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_kappa: Option<f64>,
    /// Target misclassification rate to calibrate the concentration for.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlap: Option<f64>,
    /// Fraction of coordinates zeroed in each mean.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<f64>,
    /// Mixing proportions, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_jitter_sd_frac: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate_multiplier: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration_samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// dense-csv or sparse-triplet.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_data: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_truth: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct FitFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputFlags,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub em: EmFlags,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_model: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_trace: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct PathFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputFlags,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub em: EmFlags,
    #[command(flatten)]
    #[serde(flatten)]
    pub path: PathKnobs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_path: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_csv: Option<String>,
    /// Directory for one model file per recorded step.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub models_dir: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct SelectFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputFlags,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_min: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    /// AIC, BIC, RIC, RICc or EBIC.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_criterion: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_criterion: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub em: EmFlags,
    #[command(flatten)]
    #[serde(flatten)]
    pub path: PathKnobs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_report: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_model: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct SkmeansFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputFlags,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct VizFlags {
    /// Model file to draw.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    /// Data to draw, grouped by the model's assignments (optional).
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputFlags,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Pixel block size.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_means: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_data: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_order: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct MetricsFlags {
    /// Ground-truth file written by `simulate`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    /// Data to assign when the model carries no labels.
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputFlags,
    /// Output file; stdout when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}
