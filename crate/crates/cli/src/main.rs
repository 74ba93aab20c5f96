mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Context;
use crate::config::RunConfig;
use crate::error::CliResult;

/// Backward reconstruction for the strongly damped wave equation by spectral
/// quasi-reversibility.
#[derive(Debug, Parser)]
#[command(name = "qrwave", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Configuration file of dotted keys (`reg.C1 = 1.0`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Overrides `noise.seed` and `verify.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evolve the configured truth forward and write its trajectory.
    Forward,
    /// Perturb terminal data, reconstruct, and report errors.
    Invert,
    /// Noise-level sweep under gamma = eps^(-1/2).
    Sweep,
    /// Operator bounds, solver cross-checks and the energy envelope.
    Verify,
    /// Naive versus regularized backward amplification of one mode.
    DemoIllposed,
}

fn run(cli: &Cli) -> CliResult<()> {
    let mut config = RunConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.override_seed(seed);
    }
    let ctx = Context { config: &config, out: &cli.out, quiet: cli.quiet };
    match cli.command {
        Cmd::Forward => commands::forward(&ctx),
        Cmd::Invert => commands::invert(&ctx),
        Cmd::Sweep => commands::sweep(&ctx),
        Cmd::Verify => commands::verify(&ctx),
        Cmd::DemoIllposed => commands::demo_illposed(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qrwave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
