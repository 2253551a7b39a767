use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sparse_movmf::dataset::{load_matrix, Format};
use sparse_movmf::model_io::ModelDocument;
use sparse_movmf::vmf::mle_fit;

fn smovmf(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smovmf")).args(args).current_dir(dir).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = smovmf(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn failure(dir: &Path, args: &[&str]) -> (i32, Value) {
    let out = smovmf(dir, args);
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is one JSON object");
    (out.status.code().expect("exit code"), err)
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn json(dir: &Path, name: &str) -> Value {
    serde_json::from_slice(&read(dir, name)).unwrap()
}

const SIM: &[&str] = &["simulate", "--d", "10", "--k", "3", "--n", "300", "--base-kappa", "25", "--sparsity", "0.3", "--seed", "3"];

fn simulated() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), SIM);
    dir
}

#[test]
fn simulate_example_is_deterministic() {
    let args = ["simulate", "--d", "100", "--k", "4", "--n", "200", "--base-kappa", "17.34", "--sparsity", "0.10", "--seed", "7"];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    ok(a.path(), &args);
    ok(b.path(), &args);
    for f in ["data.csv", "truth.json"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
    }
    let truth = json(a.path(), "truth.json");
    assert_eq!(truth["K"], 4);
    assert_eq!(truth["run"]["seed"], 7);
    assert_eq!(truth["run"]["config"]["base_kappa"], 17.34);
    assert_eq!(truth["run"]["config_sha256"].as_str().unwrap().len(), 64);
    for mu in truth["mu"].as_array().unwrap() {
        assert_eq!(mu.as_array().unwrap().len(), 90);
    }
    let x = load_matrix(&a.path().join("data.csv"), Format::DenseCsv, false).unwrap();
    assert_eq!((x.n_rows(), x.dim()), (200, 100));
    x.check_unit_rows().unwrap();
}

#[test]
fn fit_and_path_are_byte_identical_across_runs_and_thread_counts() {
    let dir = simulated();
    let d = dir.path();
    let mut outputs = Vec::new();
    for threads in ["1", "1", "3"] {
        ok(d, &["--threads", threads, "fit", "-i", "data.csv", "--k", "3", "--beta", "0.5", "--restarts", "4", "--seed", "9"]);
        ok(d, &["--threads", threads, "path", "-i", "data.csv", "--k", "3", "--restarts", "4", "--seed", "9", "--max-steps", "8"]);
        outputs.push(["model.json", "trace.csv", "path.json", "path.csv"].map(|f| read(d, f)));
    }
    assert!(outputs[0] == outputs[1], "same thread count");
    assert!(outputs[0] == outputs[2], "different thread count");
}

#[test]
fn fit_example_with_shared_kappa() {
    let dir = simulated();
    ok(dir.path(), &["fit", "-i", "data.csv", "--k", "3", "--beta", "0", "--restarts", "10", "--kappa-mode", "shared"]);
    let model = json(dir.path(), "model.json");
    assert_eq!(model["kappa_mode"], "shared");
    assert!(model["kappa"].is_f64());
    assert_eq!(model["labels"].as_array().unwrap().len(), 300);
    let trace = String::from_utf8(read(dir.path(), "trace.csv")).unwrap();
    assert!(trace.starts_with("# run {"));
    assert!(trace.lines().nth(1).unwrap() == "iteration,penalized_log_likelihood");
}

#[test]
fn single_component_fit_is_the_closed_form() {
    let dir = simulated();
    ok(dir.path(), &["fit", "-i", "data.csv", "--k", "1", "--beta", "0"]);
    let model = ModelDocument::load(&dir.path().join("model.json")).unwrap().params().unwrap();
    let x = load_matrix(&dir.path().join("data.csv"), Format::DenseCsv, false).unwrap();
    let mle = mle_fit(&x, &vec![1.0; x.n_rows()]).unwrap();
    for j in 0..10 {
        assert!((model.means[[0, j]] - mle.params.mu[j]).abs() < 1e-12);
    }
    assert!((model.kappa(0) - mle.params.kappa).abs() < 1e-9 * mle.params.kappa);
}

#[test]
fn over_penalised_fit_fails_with_statuses() {
    let dir = simulated();
    let (code, err) = failure(dir.path(), &["fit", "-i", "data.csv", "--k", "3", "--beta", "1e9", "--restarts", "3"]);
    assert_eq!(code, 1);
    assert_eq!(err["error"], "AllRestartsFailed");
    assert_eq!(err["statuses"], serde_json::json!(["ZeroMean", "ZeroMean", "ZeroMean"]));
}

#[test]
fn usage_and_config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (code, err) = failure(d, &["simulate", "--d", "10", "--k", "3"]);
    assert_eq!(code, 2);
    assert!(err["message"].as_str().unwrap().contains("base_kappa or overlap"));
    assert_eq!(failure(d, &["simulate", "--nonsense", "1"]).0, 2);
    assert_eq!(failure(d, &["fit", "--k", "2"]).0, 2);
    std::fs::write(d.join("bad.cfg"), "k = 3\ntypo_key = 1\n").unwrap();
    let (code, err) = failure(d, &["--config", "bad.cfg", "simulate", "--base-kappa", "5"]);
    assert_eq!(code, 2);
    assert!(err["message"].as_str().unwrap().contains("typo_key"));
    std::fs::write(d.join("raw.csv"), "1,2\n3,4\n").unwrap();
    let (code, err) = failure(d, &["fit", "-i", "raw.csv", "--k", "1"]);
    assert_eq!((code, err["error"].as_str().unwrap()), (2, "NotUnitNorm"));
    ok(d, &["fit", "-i", "raw.csv", "--k", "1", "--normalize"]);
}

#[test]
fn impossible_sparsity_is_a_generation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) =
        failure(dir.path(), &["simulate", "--d", "4", "--k", "9", "--sparsity", "0.75", "--base-kappa", "5", "--n", "10"]);
    assert_eq!(code, 1);
    assert_eq!(err["error"], "CannotSparsify");
}

#[test]
fn flags_beat_config_file_beats_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("sim.cfg"), "k = 5\nn = 40\nd = 6\nbase-kappa = 10\n").unwrap();
    ok(d, &["--config", "sim.cfg", "simulate", "--k", "2"]);
    let truth = json(d, "truth.json");
    assert_eq!(truth["K"], 2);
    assert_eq!(truth["d"], 6);
    assert_eq!(truth["labels"].as_array().unwrap().len(), 40);
    assert_eq!(truth["run"]["config"]["candidate_multiplier"], 20);
    std::fs::write(d.join("sim.json"), r#"{"k": 3, "n": 30, "d": 5, "overlap": 0.05, "calibration_samples": 2000}"#).unwrap();
    ok(d, &["--config", "sim.json", "simulate"]);
    assert_eq!(json(d, "truth.json")["K"], 3);
}

#[test]
fn path_select_skmeans_viz_metrics_pipeline() {
    let dir = simulated();
    let d = dir.path();
    ok(d, &["path", "-i", "data.csv", "--k", "3", "--min-rel-increase", "1e-3", "--max-steps", "1000", "--models-dir", "steps"]);
    let path = json(d, "path.json");
    let steps = path["steps"].as_array().unwrap();
    assert!(steps.len() >= 2);
    assert_eq!(steps[0]["beta"], 0.0);
    assert!(d.join("steps/step_0000.json").exists());
    let csv = String::from_utf8(read(d, "path.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2 + steps.len());

    ok(d, &["select", "-i", "data.csv", "--k-min", "2", "--k-max", "4", "--k-criterion", "BIC", "--beta-criterion", "BIC", "--restarts", "3"]);
    let report = json(d, "selection.json");
    assert_eq!(report["k_star"]["BIC"], 3);
    assert_eq!(report["final"]["K"], 3);
    assert_eq!(report["candidates"].as_array().unwrap().len(), 3);

    ok(d, &["skmeans", "-i", "data.csv", "--k", "3"]);
    assert_eq!(json(d, "skmeans.json")["labels"].as_array().unwrap().len(), 300);

    ok(d, &["viz", "--model", "model.json", "-i", "data.csv"]);
    let first = (read(d, "means.ppm"), read(d, "data.ppm"), read(d, "order.csv"));
    ok(d, &["viz", "--model", "model.json", "-i", "data.csv"]);
    assert!(first == (read(d, "means.ppm"), read(d, "data.ppm"), read(d, "order.csv")));
    assert!(first.0.starts_with(b"P6\n# run config_sha256 "));

    ok(d, &["metrics", "--truth", "truth.json", "--model", "model.json", "--out", "metrics.json"]);
    let m = json(d, "metrics.json");
    assert!(m["ari"].as_f64().unwrap() > 0.8);
    for key in ["sparsity", "true_sparsity"] {
        assert!(m[key].is_f64());
    }
    assert!(m["support"]["precision"].is_f64() && m["support"]["recall"].is_f64());
}
