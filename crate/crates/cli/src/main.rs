mod commands;
mod error;
mod grid;
mod models;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{eval, frac, mass, scan, solve, sum, verify};
use error::{CliError, CliResult, Status};

/// Heat kernels on model manifolds, radial heat solves and monotonicity checks.
#[derive(Debug, Parser)]
#[command(name = "heatkern", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate heat kernels on a distance/time grid.
    Eval(eval::EvalArgs),
    /// Total mass of the heat kernel.
    Mass(mass::MassArgs),
    /// Scan for positive radial slopes (exit 4 when one exceeds the tolerance).
    Scan(scan::ScanArgs),
    /// Solve the radial heat equation on a profile.
    Solve(solve::SolveArgs),
    /// Fractional Laplacian kernels and pointwise inequalities.
    #[command(subcommand)]
    Frac(frac::FracCommand),
    /// Positivity sums built from completely monotonic functions.
    #[command(subcommand)]
    Sum(sum::SumCommand),
    /// Run the invariant suites (exit 5 when any fails).
    Verify(verify::VerifyArgs),
}

// HEATKERN_THREADS caps the worker count; 0 means serial.
fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("HEATKERN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        CliError::Config(format!(
            "HEATKERN_THREADS must be a nonnegative integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: &Cli) -> CliResult<Status> {
    configure_threads()?;
    match &cli.command {
        Command::Eval(a) => eval::run(a),
        Command::Mass(a) => mass::run(a),
        Command::Scan(a) => scan::run(a),
        Command::Solve(a) => solve::run(a),
        Command::Frac(c) => frac::run(c),
        Command::Sum(c) => sum::run(c),
        Command::Verify(a) => verify::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("heatkern: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
