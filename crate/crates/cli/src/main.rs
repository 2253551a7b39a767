//! `smovmf`: command-line front end for sparse von Mises-Fisher mixtures.
//!
//! Exit codes: 0 on success, 1 when a computation fails, 2 for usage,
//! configuration and input errors. Errors are written to stderr as one JSON
//! object.

mod args;
mod commands;
mod config;
mod settings;

use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::json;
use sparse_movmf::{Error, Result};

use args::{Cli, Command};
use commands::Run;

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "Domain",
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::NotUnitNorm { .. } => "NotUnitNorm",
        Error::ZeroResultant => "ZeroResultant",
        Error::Parse { .. } => "Parse",
        Error::ZeroRow { .. } => "ZeroRow",
        Error::Io { .. } => "Io",
        Error::TooFew { .. } => "TooFew",
        Error::CannotSparsify { .. } => "CannotSparsify",
        Error::NotBracketed { .. } => "NotBracketed",
        Error::InitFailure { .. } => "InitFailure",
        Error::Em { .. } => "Em",
        Error::AllRestartsFailed { .. } => "AllRestartsFailed",
        Error::NoIncrementAvailable => "NoIncrementAvailable",
        Error::LengthMismatch { .. } => "LengthMismatch",
        Error::Config(_) => "Config",
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::Io { .. } | Error::NotUnitNorm { .. } | Error::ZeroRow { .. } => 2,
        _ => 1,
    }
}

fn report(e: &Error) -> ExitCode {
    let code = exit_code(e);
    let mut v = json!({ "error": error_kind(e), "message": e.to_string(), "exit_code": code });
    if let Error::AllRestartsFailed { outcomes } = e {
        v["statuses"] = json!(outcomes);
    }
    eprintln!("{v}");
    ExitCode::from(code)
}

fn resolve<T, F>(file: Option<&serde_json::Map<String, serde_json::Value>>, flags: &F, command: &'static str, seed: impl Fn(&T) -> u64) -> Result<(T, Run)>
where
    T: Default + Serialize + serde::de::DeserializeOwned,
    F: Serialize,
{
    let (settings, config) = config::resolve::<T, F>(file, flags)?;
    let run = Run { command, seed: seed(&settings), config };
    Ok((settings, run))
}

fn execute(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let file = cli.config.as_deref().map(config::read_config_file).transpose()?;
    let file = file.as_ref();
    let name = cli.command.name();
    match &cli.command {
        Command::Simulate(f) => {
            let (s, run) = resolve(file, f, name, |s: &settings::SimulateSettings| s.seed)?;
            commands::simulate(&s, &run)
        }
        Command::Fit(f) => {
            let (s, run) = resolve(file, f, name, |s: &settings::FitSettings| s.em.seed)?;
            commands::fit(&s, &run)
        }
        Command::Path(f) => {
            let (s, run) = resolve(file, f, name, |s: &settings::PathCmdSettings| s.em.seed)?;
            commands::path(&s, &run)
        }
        Command::Select(f) => {
            let (s, run) = resolve(file, f, name, |s: &settings::SelectSettings| s.em.seed)?;
            commands::select(&s, &run)
        }
        Command::Skmeans(f) => {
            let (s, run) = resolve(file, f, name, |s: &settings::SkmeansSettings| s.seed)?;
            commands::skmeans(&s, &run)
        }
        Command::Viz(f) => {
            let (s, run) = resolve(file, f, name, |_: &settings::VizSettings| 0)?;
            commands::viz(&s, &run)
        }
        Command::Metrics(f) => {
            let (s, run) = resolve(file, f, name, |_: &settings::MetricsSettings| 0)?;
            print!("{}", commands::metrics(&s, &run)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let v = json!({ "error": "Usage", "message": e.render().to_string(), "exit_code": 2 });
            eprintln!("{v}");
            return ExitCode::from(2);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}
