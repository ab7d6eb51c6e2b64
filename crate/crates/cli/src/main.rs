//! `gaugedeform`: verify algebras, deformations, theories and observables
//! from a JSON run configuration.
//!
//! Exit codes: 0 pass, 1 check failure, 2 configuration error, 3 singular Y.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gaugedeform::Error as CoreError;
use thiserror::Error;

use config::{RunConfig, ToleranceSection};
use report::{ErrorEntry, RunReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Schema(String),
    #[error("{0}")]
    Gate(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::SingularY { .. }) => 3,
            CliError::Gate(_)
            | CliError::Core(CoreError::Precondition { .. })
            | CliError::Core(CoreError::IndefiniteMetric)
            | CliError::Core(CoreError::NonFinite(_)) => 1,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Read { .. } | CliError::Write { .. } => "io",
            CliError::Json(_) | CliError::Schema(_) => "config",
            CliError::Gate(_) => "deformation_gate",
            CliError::Core(CoreError::SingularY { .. }) => "singular_y",
            CliError::Core(CoreError::Precondition { .. }) => "precondition",
            CliError::Core(_) => "core",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gaugedeform", version, about = "Jet-space verification of deformed gauge theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Jacobi identity, Killing metric, invariance, mass split, homomorphism.
    VerifyAlgebra(CommonArgs),
    /// Linear and quadratic coefficient relations, e-mass obstruction, parity.
    VerifyDeformation(CommonArgs),
    /// Full identity suite on random jets over the configured seeds.
    VerifyTheory {
        #[command(flatten)]
        common: CommonArgs,
        /// Run the suite even if the deformation fails its relations.
        #[arg(long)]
        force: bool,
    },
    /// Charge quadratures, energy positivity and causality.
    Observables(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Write the JSON report here (overrides `output` in the config).
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Replace the configured seed list by this single seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Jet polynomial degree.
    #[arg(long, value_name = "D")]
    degree: Option<usize>,
    /// Use this tolerance for every check.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
}

fn load_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let text =
        std::fs::read_to_string(&args.config).map_err(|source| CliError::Read { path: args.config.clone(), source })?;
    let mut cfg: RunConfig = serde_json::from_str(&text)?;
    if let Some(s) = args.seed {
        cfg.jet.seeds = vec![s];
    }
    if let Some(d) = args.degree {
        cfg.jet.degree = d;
    }
    if let Some(t) = args.tol {
        if t.is_nan() || t <= 0.0 {
            return Err(CliError::Schema(format!("--tol must be positive, got {t}")));
        }
        cfg.tolerances = ToleranceSection::uniform(t);
    }
    if let Some(p) = &args.json {
        cfg.output = Some(p.clone());
    }
    Ok(cfg)
}

fn advice(e: &CliError, cfg: &RunConfig) -> Option<String> {
    match e {
        CliError::Core(CoreError::SingularY { .. }) => Some(format!(
            "Y is not invertible at jet amplitude {}; lower jet.amplitude (0.1 is safe for unit couplings)",
            cfg.jet.amplitude
        )),
        CliError::Core(CoreError::JetOrderExhausted) => Some(format!(
            "jet.degree {} leaves too few derivatives; the noether check needs degree 3 or more",
            cfg.jet.degree
        )),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args, force) = match &cli.command {
        Command::VerifyAlgebra(a) => ("verify-algebra", a, false),
        Command::VerifyDeformation(a) => ("verify-deformation", a, false),
        Command::VerifyTheory { common, force } => ("verify-theory", common, *force),
        Command::Observables(a) => ("observables", a, false),
    };
    let cfg = match load_config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let mut report = RunReport::new(name, cfg.clone());
    let outcome = match &cli.command {
        Command::VerifyAlgebra(_) => commands::verify_algebra(&cfg, &mut report),
        Command::VerifyDeformation(_) => commands::verify_deformation(&cfg, &mut report),
        Command::VerifyTheory { .. } => commands::verify_theory(&cfg, force, &mut report),
        Command::Observables(_) => commands::observables(&cfg, &mut report),
    };
    let mut code = if report.pass { 0 } else { 1 };
    if let Err(e) = &outcome {
        code = e.exit_code();
        report.fail_with(ErrorEntry { kind: e.kind().to_string(), message: e.to_string(), advice: advice(e, &cfg) });
    }
    print!("{}", report.summary());
    if let Some(path) = &cfg.output {
        if let Err(source) = std::fs::write(path, report.to_json()) {
            eprintln!("error: {}", CliError::Write { path: path.clone(), source });
            return ExitCode::from(2);
        }
    }
    if let Err(e) = outcome {
        eprintln!("error: {e}");
    }
    ExitCode::from(code)
}
