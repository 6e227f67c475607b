//! `quantbid`: experiment runner for seller-optimal auctions with binary bids.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a verification check failed,
//! 3 capacity or I/O failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "quantbid",
    version,
    about = "Seller-optimal auctions with binary-quantized bids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the mechanism table for the configured instance and thresholds.
    Design(RunArgs),
    /// Evaluate the seller's gain over a threshold grid (CSV).
    Sweep(RunArgs),
    /// Check a mechanism table for truthfulness, participation and optimality.
    Verify(RunArgs),
    /// Play the mechanism against sampled values (Monte Carlo).
    Simulate(RunArgs),
    /// Analog versus quantized bidding as the bidder count grows (CSV).
    Compare(RunArgs),
    /// Find the gain-maximizing thresholds.
    Optimize(RunArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// Experiment configuration (TOML).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Overrides the configured trial count.
    #[arg(long, value_name = "U64")]
    pub trials: Option<u64>,
    /// Overrides the configured grid step.
    #[arg(long = "grid-step", value_name = "F64")]
    pub grid_step: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(CliError::VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Design(args) => commands::design(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Verify(args) => commands::verify(args),
        Command::Simulate(args) => commands::simulate(args),
        Command::Compare(args) => commands::compare(args),
        Command::Optimize(args) => commands::optimize(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
