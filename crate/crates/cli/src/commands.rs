//! The subcommands: load inputs, call the library, write outputs. Every
//! output carries a run record (command, version, resolved configuration,
//! its hash and the seed).

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use sparse_movmf::dataset::{
    simulate_mixture, triplet_string, dense_csv_string, Format, GroundTruthDocument, Separation, SimulationConfig,
};
use sparse_movmf::em::{e_step, fit_best_of, hard_assign, FitResult};
use sparse_movmf::metrics::{adjusted_rand_index, sparsity, support_precision_recall};
use sparse_movmf::model_io::{sparse_rows, ModelDocument};
use sparse_movmf::path::follow_path;
use sparse_movmf::selection::{CriterionKind, SelectionConfig};
use sparse_movmf::skmeans::skmeans_best_of;
use sparse_movmf::viz::{order_components, order_data_rows, order_dimensions, render_pixel_map, RenderMode};
use sparse_movmf::{Dataset, Error, Result};

use crate::config::config_hash;
use crate::settings::*;

/// Provenance embedded in every output.
#[derive(Debug, Clone)]
pub struct Run {
    pub command: &'static str,
    pub config: Value,
    pub seed: u64,
}

impl Run {
    pub fn record(&self) -> Value {
        json!({
            "tool": "smovmf",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.seed,
            "config_sha256": config_hash(&self.config),
            "config": self.config,
        })
    }

    /// `# run {...}` line for text outputs.
    fn comment(&self) -> String {
        format!("# run {}\n", self.record())
    }
}

fn write(path: &str, bytes: impl AsRef<[u8]>) -> Result<()> {
    let path = Path::new(path);
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Io { path: dir.display().to_string(), message: e.to_string() })?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serialisable") + "\n"
}

fn model_document(fit: &FitResult, x: &Dataset, run: &Run) -> ModelDocument {
    let mut doc = ModelDocument::from_fit(fit, run.seed);
    doc.labels = Some(hard_assign(&e_step(x, &fit.params).tau));
    doc.run = Some(run.record());
    doc
}

pub fn simulate(s: &SimulateSettings, run: &Run) -> Result<()> {
    let separation = match (s.base_kappa, s.overlap) {
        (Some(k), None) => Separation::BaseKappa(k),
        (None, Some(t)) => Separation::OverlapTarget(t),
        (None, None) => return Err(Error::Config("one of base_kappa or overlap is required".into())),
        (Some(_), Some(_)) => return Err(Error::Config("base_kappa and overlap are mutually exclusive".into())),
    };
    let format: Format = s.format.parse()?;
    let cfg = SimulationConfig {
        k: s.k,
        d: s.d,
        n: s.n,
        separation,
        sparsity: s.sparsity,
        alpha: s.alpha.clone(),
        kappa_jitter_sd_frac: s.kappa_jitter_sd_frac,
        candidate_multiplier: s.candidate_multiplier,
        calibration_samples: s.calibration_samples,
        seed: s.seed,
    };
    cfg.validate()?;
    let (x, truth) = simulate_mixture(&cfg)?;
    let body = match format {
        Format::DenseCsv => dense_csv_string(&x),
        Format::SparseTriplet => triplet_string(&x),
    };
    write(&s.out_data, run.comment() + &body)?;
    let doc = GroundTruthDocument::from_truth(&truth, s.seed, Some(cfg));
    let mut value = serde_json::to_value(&doc).expect("serialisable");
    value["run"] = run.record();
    write(&s.out_truth, pretty(&value))
}

pub fn fit(s: &FitSettings, run: &Run) -> Result<()> {
    let opts = s.em.fit_options(s.beta)?;
    let x = s.input.load()?;
    let fit = fit_best_of(&x, s.k, &opts, s.em.restarts)?;
    model_document(&fit, &x, run).save(s.out_model.as_ref())?;
    let mut trace = run.comment() + "iteration,penalized_log_likelihood\n";
    for (i, v) in fit.trace.iter().enumerate() {
        let _ = writeln!(trace, "{i},{v}");
    }
    write(&s.out_trace, trace)
}

pub fn path(s: &PathCmdSettings, run: &Run) -> Result<()> {
    let opts = s.path.path_options(s.em.fit_options(0.0)?)?;
    let x = s.input.load()?;
    let dense = fit_best_of(&x, s.k, &opts.fit, s.em.restarts)?;
    let path = follow_path(&x, s.k, &opts, &dense)?;
    let best: serde_json::Map<String, Value> = CriterionKind::ALL
        .iter()
        .filter_map(|&c| sparse_movmf::selection::best_step(&path, c).map(|i| (c.name().to_string(), json!(i))))
        .collect();
    let steps: Vec<Value> = path
        .records()
        .into_iter()
        .zip(path.steps.iter().map(|s| Some(&s.fit)).chain(path.failure.iter().map(|f| Some(&f.fit))))
        .map(|(record, fit)| {
            let mut v = serde_json::to_value(record).expect("serialisable");
            if let Some(fit) = fit {
                v["model"] = serde_json::to_value(ModelDocument::from_fit(fit, run.seed)).expect("serialisable");
            }
            v
        })
        .collect();
    let doc = json!({
        "run": run.record(),
        "K": s.k,
        "termination": path.termination,
        "best_step": best,
        "steps": steps,
    });
    write(&s.out_path, pretty(&doc))?;
    write(&s.out_csv, run.comment() + &path.summary_csv())?;
    if let Some(dir) = &s.models_dir {
        for (i, step) in path.steps.iter().enumerate() {
            let doc = model_document(&step.fit, &x, run);
            write(&format!("{dir}/step_{i:04}.json"), doc.to_json())?;
        }
    }
    Ok(())
}

pub fn select(s: &SelectSettings, run: &Run) -> Result<()> {
    if s.k_min == 0 || s.k_min > s.k_max {
        return Err(Error::Config(format!("need 1 <= k_min <= k_max, got {}..{}", s.k_min, s.k_max)));
    }
    let (k_criterion, beta_criterion) = s.criteria()?;
    let cfg = SelectionConfig {
        k_candidates: (s.k_min..=s.k_max).collect(),
        n_restarts: s.em.restarts,
        k_criterion,
        beta_criterion,
        path: s.path.path_options(s.em.fit_options(0.0)?)?,
    };
    let x = s.input.load()?;
    let report = sparse_movmf::selection::select_model(&x, &cfg)?;
    let candidates: Vec<Value> = report
        .candidates
        .iter()
        .map(|c| {
            json!({
                "K": c.k,
                "skipped": c.skipped,
                "dense_log_likelihood": c.dense.as_ref().map(|f| f.log_likelihood),
                "dense_ic": c.dense_ic,
                "termination": c.path.as_ref().map(|p| p.termination),
                "best_step": c.best_steps.iter().map(|(k, v)| (k.name().to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
                "path": c.path.as_ref().map(|p| p.records()),
            })
        })
        .collect();
    let k_star: serde_json::Map<String, Value> =
        report.k_star.iter().map(|(c, k)| (c.name().to_string(), json!(k))).collect();
    let doc = json!({
        "run": run.record(),
        "k_criterion": k_criterion,
        "beta_criterion": beta_criterion,
        "k_star": k_star,
        "final": report.final_choice.map(|(k, step)| json!({"K": k, "step": step})),
        "candidates": candidates,
    });
    write(&s.out_report, pretty(&doc))?;
    let fit = report
        .final_fit()
        .ok_or_else(|| Error::Config("no candidate K produced a usable path".into()))?;
    model_document(fit, &x, run).save(s.out_model.as_ref())
}

pub fn skmeans(s: &SkmeansSettings, run: &Run) -> Result<()> {
    let x = s.input.load()?;
    let res = skmeans_best_of(&x, s.k, s.max_iters, s.seed, s.restarts)?;
    let doc = json!({
        "run": run.record(),
        "K": s.k,
        "d": x.dim(),
        "prototypes": sparse_rows(&res.prototypes),
        "labels": res.labels,
        "coherence": res.coherence,
        "trace": res.trace,
        "n_iters": res.n_iters,
        "converged": res.converged,
    });
    write(&s.out, pretty(&doc))
}

/// Adds a provenance comment after the magic number; PPM readers skip
/// comment lines in the header.
fn tag_ppm(img: Vec<u8>, run: &Run) -> Vec<u8> {
    let mut out = format!("P6\n# run config_sha256 {}\n", config_hash(&run.config)).into_bytes();
    out.extend_from_slice(&img[3..]);
    out
}

pub fn viz(s: &VizSettings, run: &Run) -> Result<()> {
    let model = ModelDocument::load(required(&s.model, "model")?.as_ref())?;
    let params = model.params()?;
    let dims = order_dimensions(&params, s.epsilon);
    let rows = order_components(&params.alpha);
    let img = render_pixel_map(&params.means, &dims, &rows, RenderMode::Means, s.scale)?;
    write(&s.out_means, tag_ppm(img, run))?;
    write(&s.out_order, run.comment() + &dims.to_csv())?;
    if s.input.input.is_some() {
        let x = s.input.load()?;
        if x.dim() != params.dim() {
            return Err(Error::DimensionMismatch { expected: params.dim(), got: x.dim() });
        }
        let labels = hard_assign(&e_step(&x, &params).tau);
        let order = order_data_rows(&labels, &params.alpha);
        let img = render_pixel_map(&x.to_dense(), &dims, &order, RenderMode::Data, s.scale)?;
        write(&s.out_data, tag_ppm(img, run))?;
    }
    Ok(())
}

pub fn metrics(s: &MetricsSettings, run: &Run) -> Result<String> {
    let text = std::fs::read_to_string(required(&s.truth, "truth")?)
        .map_err(|e| Error::Io { path: s.truth.clone().unwrap_or_default(), message: e.to_string() })?;
    let truth: GroundTruthDocument =
        serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    let truth = truth.to_truth()?;
    let model = ModelDocument::load(required(&s.model, "model")?.as_ref())?;
    let params = model.params()?;
    let labels = match (&model.labels, &s.input.input) {
        (_, Some(_)) => hard_assign(&e_step(&s.input.load()?, &params).tau),
        (Some(l), None) => l.clone(),
        (None, None) => return Err(Error::Config("model has no labels; pass the data with --input".into())),
    };
    let ari = adjusted_rand_index(&labels, &truth.labels)?;
    let support = support_precision_recall(&params, &truth)?;
    let doc = json!({
        "run": run.record(),
        "ari": ari,
        "sparsity": sparsity(&params),
        "true_sparsity": sparsity(&truth.params),
        "support": support,
    });
    let out = pretty(&doc);
    if let Some(path) = &s.out {
        write(path, &out)?;
        Ok(String::new())
    } else {
        Ok(out)
    }
}
