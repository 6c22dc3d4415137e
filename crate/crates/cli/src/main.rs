//! Command-line driver: compute survival series, two-mass oscillations,
//! dilation/contraction comparisons, and parameter scans, emitting
//! machine-readable CSV or JSON.

mod cli_error;
mod commands;
mod output;
mod runconfig;

use clap::{Parser, Subcommand};

use commands::{CompareArgs, OscillateArgs, ScanArgs};
use runconfig::RunArgs;

#[derive(Parser)]
#[command(
    name = "decaylaw",
    version,
    about = "Decay and oscillation laws of moving unstable quantum states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Survival amplitude series for one density and preparation
    Decay(RunArgs),
    /// Two-mass clock evolution with optional cos² closed form
    Oscillate(OscillateArgs),
    /// Compare a moving run against a rest run (JSON report)
    Compare(CompareArgs),
    /// Sweep p, v, gamma, or t; one row per scan point
    Scan(ScanArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decay(args) => commands::cmd_decay(args),
        Command::Oscillate(args) => commands::cmd_oscillate(args),
        Command::Compare(args) => commands::cmd_compare(args),
        Command::Scan(args) => commands::cmd_scan(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
