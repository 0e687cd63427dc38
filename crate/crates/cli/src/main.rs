//! Command-line front end for the CRLB library: single-shot CRLB and
//! optimization reports as JSON, and the randomized constellation study
//! as plot-ready CSV.
//!
//! Exit codes: 0 success, 1 validation, 2 numerical (singular Fisher
//! information), 3 I/O.

mod commands;
mod error;
mod scenario;
mod study;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser)]
#[command(name = "mimo-crlb", version, about = "CRLB and trade-off optimization for distributed MIMO radar")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the CRLB matrix and weighted trace for one scenario.
    Crlb(CrlbArgs),
    /// Minimize the weighted CRLB trace over the trade-off box.
    Optimize(OptimizeArgs),
    /// Random-constellation study; writes a records CSV and a CDF companion.
    Montecarlo(MontecarloArgs),
}

/// Parses `l,u` into a bounds pair.
fn parse_bounds(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated numbers: l,u".into());
    }
    let lower: f64 = parts[0].trim().parse().map_err(|e| format!("lower bound: {e}"))?;
    let upper: f64 = parts[1].trim().parse().map_err(|e| format!("upper bound: {e}"))?;
    Ok((lower, upper))
}

#[derive(Args)]
struct CrlbArgs {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: std::path::PathBuf,
    /// Trade-off vector, one value per Tx; defaults to the balanced point sqrt(l*u).
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Velocity-block weight in f(alpha).
    #[arg(long, default_value_t = 1.0)]
    w: f64,
    /// Overrides the scenario's noise constant.
    #[arg(long)]
    sigma0: Option<f64>,
    /// Trade-off box bounds l,u.
    #[arg(long, value_parser = parse_bounds, default_value = "1,100")]
    bounds: (f64, f64),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Local,
    Pso,
    Vertex,
    All,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: std::path::PathBuf,
    /// Solver to run; `all` runs every solver and prints the comparison
    /// ordered by objective value.
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    /// Start point for the local solver and swarm hint; defaults to the
    /// balanced point sqrt(l*u).
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Velocity-block weight in f(alpha).
    #[arg(long, default_value_t = 1.0)]
    w: f64,
    /// Swarm RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides the scenario's noise constant.
    #[arg(long)]
    sigma0: Option<f64>,
    /// Trade-off box bounds l,u.
    #[arg(long, value_parser = parse_bounds, default_value = "1,100")]
    bounds: (f64, f64),
}

#[derive(Args)]
struct MontecarloArgs {
    /// Number of random constellations.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Velocity-block weights; one solver pass per value.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0, 10.0])]
    w: Vec<f64>,
    /// Master seed; every trial derives its own stream from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise constant sigma_0.
    #[arg(long, default_value_t = 1.0)]
    sigma0: f64,
    /// Trade-off box bounds l,u.
    #[arg(long, value_parser = parse_bounds, default_value = "1,100")]
    bounds: (f64, f64),
    /// Records CSV path; the CDF companion lands next to it with a
    /// `_cdf.csv` suffix.
    #[arg(long)]
    out: std::path::PathBuf,
    /// Worker threads; the records are identical for any count.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Crlb(args) => commands::cmd_crlb(&args),
        Command::Optimize(args) => commands::cmd_optimize(&args),
        Command::Montecarlo(args) => study::cmd_montecarlo(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
