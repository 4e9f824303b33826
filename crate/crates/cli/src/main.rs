//! `sharp-ineq`: batch runner for sharp-inequality experiments.
//!
//! ```text
//! sharp-ineq <constant|verify|stechkin|oracle> --config path [--seed u64] [--tol f64] [--out path] [--format csv|json]
//! ```
//!
//! Exit codes: 0 success, 1 inequality violation, 2 config error, 3 numeric
//! failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Outcome, Overrides};
use config::{ExperimentConfig, Format};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "sharp-ineq",
    version,
    about = "Sharp Nagy and Landau-Kolmogorov type inequalities: constants, equality checks, Stechkin curves and random suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Relative tolerance for equality verdicts.
    #[arg(long)]
    tol: Option<f64>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate μ(B_h), I(h) and I(h)/μ(B_h).
    Constant(Common),
    /// Check each theorem at its extremal function, optionally with random suites.
    Verify(Common),
    /// Tabulate the Stechkin curve E_N.
    Stechkin(Common),
    /// Run random certified-function suites and Monte Carlo cross-checks.
    Oracle(Common),
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let (common, which) = match &cli.command {
        Command::Constant(c) => (c, "constant"),
        Command::Verify(c) => (c, "verify"),
        Command::Stechkin(c) => (c, "stechkin"),
        Command::Oracle(c) => (c, "oracle"),
    };
    let cfg = ExperimentConfig::load(&common.config)?;
    let overrides = Overrides { seed: common.seed, tol: common.tol };
    let outcome = match which {
        "constant" => commands::constant(&cfg)?,
        "verify" => commands::verify(&cfg, &overrides)?,
        "stechkin" => commands::stechkin(&cfg)?,
        _ => commands::oracle(&cfg, &overrides)?,
    };
    let format = common.format.or(cfg.output.format).unwrap_or(Format::Csv);
    let path = common.out.clone().or(cfg.output.path.clone());
    output::write(&output::render(&outcome.tables, format)?, path.as_deref())?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) if outcome.violations.is_empty() => ExitCode::SUCCESS,
        Ok(outcome) => {
            for v in &outcome.violations {
                eprintln!("violation: {v}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
