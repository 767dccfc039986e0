//! Command-line driver for geodesic flow experiments. Each subcommand
//! reads a sectioned `key = value` config, runs one experiment against the
//! configured space and field, and writes a CSV artifact plus a JSON
//! mirror into the output directory.
//!
//! Exit codes: 0 when every row passes, 2 when any row is flagged (the
//! artifact is still written, with the offending rows marked), and 1 for
//! configuration or IO errors. Artifacts are byte-stable for a fixed
//! config file and seed.

mod artifact;
mod config;
mod experiments;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CliError, Experiment};

#[derive(Parser)]
#[command(
    name = "catflow",
    version,
    about = "Run geometry and flow experiments from a config file, emitting deterministic CSV/JSON artifacts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Directory for the CSV and JSON artifacts.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override the seed from the config file.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the geodesic-space axioms on seeded samples.
    Axioms(RunArgs),
    /// Check resolvent identities, firm profiles, and nonexpansiveness on samples.
    Prox(RunArgs),
    /// Scan the resolvent along a step schedule toward its limit.
    Sweep(RunArgs),
    /// Compare Yosida approximation norms against the field norm bound.
    Yosida(RunArgs),
    /// Scan both asymptotic resolvent limits against witness projections.
    Limits(RunArgs),
    /// Tabulate flow iteration errors against the quantitative bound.
    #[command(name = "error-table")]
    ErrorTable(RunArgs),
    /// Sample the flow trajectory and its distance to the zero set.
    Trajectory(RunArgs),
    /// Verify the double-sequence majorant on a (j, k) grid.
    #[command(name = "double-seq")]
    DoubleSeq(RunArgs),
}

impl Command {
    fn split(self) -> (Experiment, RunArgs) {
        match self {
            Command::Axioms(a) => (Experiment::Axioms, a),
            Command::Prox(a) => (Experiment::Prox, a),
            Command::Sweep(a) => (Experiment::Sweep, a),
            Command::Yosida(a) => (Experiment::Yosida, a),
            Command::Limits(a) => (Experiment::Limits, a),
            Command::ErrorTable(a) => (Experiment::ErrorTable, a),
            Command::Trajectory(a) => (Experiment::Trajectory, a),
            Command::DoubleSeq(a) => (Experiment::DoubleSeq, a),
        }
    }
}

fn run(experiment: Experiment, args: &RunArgs) -> Result<u64, CliError> {
    let prep = config::load(&args.config, experiment, args.seed)?;
    let table = experiments::dispatch(&prep);
    let csv_path = table.write(&args.out, &prep.config_hash, prep.seed)?;
    println!(
        "{}: {} rows, {} violations -> {}",
        experiment.name(),
        table.rows.len(),
        table.violations(),
        csv_path.display()
    );
    Ok(table.violations())
}

fn main() -> ExitCode {
    // Argument mistakes are configuration errors (exit 1); exit 2 is
    // reserved for genuine tolerance violations.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (experiment, args) = cli.command.split();
    match run(experiment, &args) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
