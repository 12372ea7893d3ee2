//! `xwave`: basis tables, cross-checked propagation and OPA entanglement
//! studies driven by JSON configs.
//!
//! Exit codes: 0 success, 2 config or input error, 3 numerical-quality failure.

mod basis;
mod config;
mod error;
mod opa;
mod output;
mod propagate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "xwave", version, about = "X-wave expansion of paraxial pulsed beams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Basis spectra, basis fields and the orthonormality matrix.
    Basis(RunArgs),
    /// Propagate a sampled spectrum directly and through the X-wave expansion.
    Propagate(RunArgs),
    /// Joint amplitude maps, locking widths and Schmidt spectrum of the OPA.
    Opa(RunArgs),
}

#[derive(Args)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Use ħ = c = 1 regardless of the config's `units`.
    #[arg(long)]
    pub natural_units: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

fn init_threads(threads: Option<usize>) -> CliResult<()> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot start thread pool: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, args, run): (&str, &RunArgs, fn(&RunArgs) -> CliResult<()>) = match &cli.command {
        Command::Basis(a) => ("basis", a, basis::run),
        Command::Propagate(a) => ("propagate", a, propagate::run),
        Command::Opa(a) => ("opa", a, opa::run),
    };
    let result = init_threads(args.threads).and_then(|()| run(args));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xwave {command}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
