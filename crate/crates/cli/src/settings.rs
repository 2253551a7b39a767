//! Resolved configurations, one per subcommand, with their defaults.

use serde::{Deserialize, Serialize};
use sparse_movmf::dataset::{load_matrix, Dataset, Format};
use sparse_movmf::selection::CriterionKind;
use sparse_movmf::{Error, FitOptions, KappaMode, PathOptions, Result};

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T> {
    s.parse()
}

pub fn required<'a>(value: &'a Option<String>, key: &str) -> Result<&'a str> {
    value.as_deref().ok_or_else(|| Error::Config(format!("{key} is required")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct InputSettings {
    pub input: Option<String>,
    pub format: String,
    pub normalize: bool,
}

impl Default for InputSettings {
    fn default() -> Self {
        InputSettings { input: None, format: "dense-csv".into(), normalize: false }
    }
}

impl InputSettings {
    pub fn load(&self) -> Result<Dataset> {
        let path = required(&self.input, "input")?;
        let x = load_matrix(path.as_ref(), parse::<Format>(&self.format)?, self.normalize)?;
        if !self.normalize {
            x.check_unit_rows()?;
        }
        Ok(x)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EmSettings {
    pub restarts: usize,
    pub kappa_mode: String,
    pub max_em_iters: usize,
    pub em_tol: f64,
    pub param_tol: f64,
    pub inner_max_iters: usize,
    pub inner_tol: f64,
    pub kappa_cap: f64,
    pub refine_kappa: bool,
    pub max_init_attempts: usize,
    pub seed: u64,
}

impl Default for EmSettings {
    fn default() -> Self {
        let f = FitOptions::default();
        EmSettings {
            restarts: 10,
            kappa_mode: f.kappa_mode.to_string(),
            max_em_iters: f.max_em_iters,
            em_tol: f.em_tol,
            param_tol: f.param_tol,
            inner_max_iters: f.inner_max_iters,
            inner_tol: f.inner_tol,
            kappa_cap: f.kappa_cap,
            refine_kappa: f.refine_kappa,
            max_init_attempts: f.max_init_attempts,
            seed: f.seed,
        }
    }
}

impl EmSettings {
    pub fn fit_options(&self, beta: f64) -> Result<FitOptions> {
        let opts = FitOptions {
            beta,
            max_em_iters: self.max_em_iters,
            em_tol: self.em_tol,
            param_tol: self.param_tol,
            inner_max_iters: self.inner_max_iters,
            inner_tol: self.inner_tol,
            kappa_cap: self.kappa_cap,
            kappa_mode: parse::<KappaMode>(&self.kappa_mode)?,
            refine_kappa: self.refine_kappa,
            seed: self.seed,
            stream: 0,
            max_init_attempts: self.max_init_attempts,
        };
        opts.validate()?;
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be >= 1".into()));
        }
        Ok(opts)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PathSettings {
    pub max_steps: usize,
    pub epsilon: f64,
    pub min_rel_increase: f64,
    pub stop_at_max_sparsity: bool,
    pub ebic_gamma: f64,
}

impl Default for PathSettings {
    fn default() -> Self {
        let p = PathOptions::default();
        PathSettings {
            max_steps: p.max_steps,
            epsilon: p.epsilon,
            min_rel_increase: p.min_rel_increase,
            stop_at_max_sparsity: p.stop_at_max_sparsity,
            ebic_gamma: p.ebic_gamma,
        }
    }
}

impl PathSettings {
    pub fn path_options(&self, fit: FitOptions) -> Result<PathOptions> {
        let opts = PathOptions {
            max_steps: self.max_steps,
            epsilon: self.epsilon,
            min_rel_increase: self.min_rel_increase,
            stop_at_max_sparsity: self.stop_at_max_sparsity,
            ebic_gamma: self.ebic_gamma,
            fit,
        };
        opts.validate()?;
        Ok(opts)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulateSettings {
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub base_kappa: Option<f64>,
    pub overlap: Option<f64>,
    pub sparsity: f64,
    pub alpha: Option<Vec<f64>>,
    pub kappa_jitter_sd_frac: f64,
    pub candidate_multiplier: usize,
    pub calibration_samples: usize,
    pub seed: u64,
    pub format: String,
    pub out_data: String,
    pub out_truth: String,
}

impl Default for SimulateSettings {
    fn default() -> Self {
        SimulateSettings {
            k: 4,
            d: 100,
            n: 1000,
            base_kappa: None,
            overlap: None,
            sparsity: 0.0,
            alpha: None,
            kappa_jitter_sd_frac: 0.025,
            candidate_multiplier: 20,
            calibration_samples: 100_000,
            seed: 0,
            format: "dense-csv".into(),
            out_data: "data.csv".into(),
            out_truth: "truth.json".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct FitSettings {
    #[serde(flatten)]
    pub input: InputSettings,
    pub k: usize,
    pub beta: f64,
    #[serde(flatten)]
    pub em: EmSettings,
    pub out_model: String,
    pub out_trace: String,
}

impl Default for FitSettings {
    fn default() -> Self {
        FitSettings {
            input: InputSettings::default(),
            k: 2,
            beta: 0.0,
            em: EmSettings::default(),
            out_model: "model.json".into(),
            out_trace: "trace.csv".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PathCmdSettings {
    #[serde(flatten)]
    pub input: InputSettings,
    pub k: usize,
    #[serde(flatten)]
    pub em: EmSettings,
    #[serde(flatten)]
    pub path: PathSettings,
    pub out_path: String,
    pub out_csv: String,
    pub models_dir: Option<String>,
}

impl Default for PathCmdSettings {
    fn default() -> Self {
        PathCmdSettings {
            input: InputSettings::default(),
            k: 2,
            em: EmSettings::default(),
            path: PathSettings::default(),
            out_path: "path.json".into(),
            out_csv: "path.csv".into(),
            models_dir: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectSettings {
    #[serde(flatten)]
    pub input: InputSettings,
    pub k_min: usize,
    pub k_max: usize,
    pub k_criterion: String,
    pub beta_criterion: String,
    #[serde(flatten)]
    pub em: EmSettings,
    #[serde(flatten)]
    pub path: PathSettings,
    pub out_report: String,
    pub out_model: String,
}

impl Default for SelectSettings {
    fn default() -> Self {
        SelectSettings {
            input: InputSettings::default(),
            k_min: 1,
            k_max: 8,
            k_criterion: "BIC".into(),
            beta_criterion: "BIC".into(),
            em: EmSettings::default(),
            path: PathSettings::default(),
            out_report: "selection.json".into(),
            out_model: "model.json".into(),
        }
    }
}

impl SelectSettings {
    pub fn criteria(&self) -> Result<(CriterionKind, CriterionKind)> {
        Ok((parse(&self.k_criterion)?, parse(&self.beta_criterion)?))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SkmeansSettings {
    #[serde(flatten)]
    pub input: InputSettings,
    pub k: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub out: String,
}

impl Default for SkmeansSettings {
    fn default() -> Self {
        SkmeansSettings {
            input: InputSettings::default(),
            k: 2,
            restarts: 10,
            max_iters: 100,
            seed: 0,
            out: "skmeans.json".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct VizSettings {
    pub model: Option<String>,
    #[serde(flatten)]
    pub input: InputSettings,
    pub epsilon: f64,
    pub scale: usize,
    pub out_means: String,
    pub out_data: String,
    pub out_order: String,
}

impl Default for VizSettings {
    fn default() -> Self {
        VizSettings {
            model: None,
            input: InputSettings::default(),
            epsilon: PathOptions::default().epsilon,
            scale: 4,
            out_means: "means.ppm".into(),
            out_data: "data.ppm".into(),
            out_order: "order.csv".into(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricsSettings {
    pub truth: Option<String>,
    pub model: Option<String>,
    #[serde(flatten)]
    pub input: InputSettings,
    pub out: Option<String>,
}
