//! `crlab`: classification, prolongation, cohomology and model checks from the command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 invalid input.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{ClassifyArgs, CohomologyArgs, ModelVerb, ProlongArgs};
use config::{Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Internal(String),
}

impl From<crlab::Error> for CliError {
    fn from(e: crlab::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Verification(e.to_string())
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) | CliError::Internal(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "crlab", version, about = "Exact computations for 2-nondegenerate CR models")]
struct Cli {
    /// Seed for on-model sampling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Number of samples for `model verify`.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Largest rank scanned or expanded by `classify`.
    #[arg(long, global = true, default_value_t = 8)]
    rank_bound: usize,
    /// Prolongation cap; defaults to depth + 3.
    #[arg(long, global = true)]
    max_prolong_degree: Option<i64>,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sampling and verification.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Admissible bigradings of a simple type, optionally checked against the table transcriptions.
    Classify(ClassifyArgs),
    /// Tanaka prolongation of a model's nonpositive part.
    Prolong(ProlongArgs),
    /// Chevalley–Eilenberg cohomology of `g_− ⊗ C ⊕ g_{0,−1}` with values in `g ⊗ C`.
    Cohomology(CohomologyArgs),
    /// Model hypersurfaces: verification and equation output.
    #[command(subcommand)]
    Model(ModelVerb),
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let default_format = match &cli.command {
        Command::Model(ModelVerb::Emit(_)) => Format::Latex,
        _ => Format::Json,
    };
    let cfg = RunConfig {
        seed: cli.seed,
        sample_count: cli.samples,
        rank_bound: cli.rank_bound,
        max_prolong_degree: cli.max_prolong_degree,
        output: cli.output.clone(),
        format: cli.format.unwrap_or(default_format),
        threads: cli.threads,
    };
    if let Some(n) = cfg.threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let outcome = match &cli.command {
        Command::Classify(a) => commands::classify(a, &cfg)?,
        Command::Prolong(a) => commands::prolong(a, &cfg)?,
        Command::Cohomology(a) => commands::cohomology(a, &cfg)?,
        Command::Model(v) => commands::model(v, &cfg)?,
    };
    output::emit(cfg.output.as_deref(), &outcome.text)?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
