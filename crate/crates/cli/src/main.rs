//! `qwalk-epi`: quantum-walk and lattice-epidemic experiments from the
//! command line.
//!
//! Exit status: 0 success, 1 verification failure, 2 invalid configuration,
//! 3 I/O failure.

mod commands;
mod config;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwalk_epi::epidemic::{Boundary, ShotMode};

use crate::commands::{CoinKind, GeometryKind};
use crate::config::{ConfigFile, List, Resolver};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qwalk-epi",
    version,
    about = "Quantum walks driving a lattice SIR epidemic"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. Unset flags fall back to `--config`,
/// then to built-in defaults.
#[derive(Debug, Args)]
pub struct Common {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: available parallelism). Never changes output.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// classical | classical-moore | quantum-histogram | quantum-collapse |
    /// quantum-statevector (`r0` accepts a comma list).
    #[arg(long, global = true)]
    pub policy: Option<String>,
    /// `exact` or a positive shot count.
    #[arg(long, global = true)]
    pub shots: Option<ShotMode>,
    /// torus | reflect
    #[arg(long, global = true)]
    pub boundary: Option<Boundary>,
    /// Flat `key = value` file; a previous run's manifest.txt works too.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve a single quantum walk and dump position distributions.
    Walk(WalkArgs),
    /// Run one epidemic realization, writing stats, infection log and frames.
    Run(RunArgs),
    /// Sweep R0 over p and tau for one or more movement policies.
    R0(R0Args),
    /// Mean cluster size M against the number of agents N.
    Cluster(ClusterArgs),
    /// Run the built-in golden checks.
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Walk(_) => "walk",
            Command::Run(_) => "run",
            Command::R0(_) => "r0",
            Command::Cluster(_) => "cluster",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// cycle | line | torus | hypercube
    #[arg(long)]
    pub geometry: Option<GeometryKind>,
    /// hadamard | hadamard2 | dft | dft3-gate | identity
    #[arg(long)]
    pub coin: Option<CoinKind>,
    /// up | down | zero | symmetric | comma list of complex amplitudes
    #[arg(long)]
    pub coin_state: Option<String>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Cycle length.
    #[arg(long)]
    pub sites: Option<usize>,
    /// Line length (positions are centred on 0).
    #[arg(long)]
    pub extent: Option<usize>,
    #[arg(long)]
    pub lx: Option<usize>,
    #[arg(long)]
    pub ly: Option<usize>,
    /// Hypercube dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Starting position, as written in the CSV `position` column.
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<i64>,
    /// Write only the final distribution.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub only_last: Option<bool>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Lattice side L.
    #[arg(long, short = 'L')]
    pub extent: Option<usize>,
    /// Number of agents N.
    #[arg(long, short = 'N')]
    pub agents: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub tau: Option<u32>,
    /// Write a frame every k steps (plus the first and last); 0 = first and last only.
    #[arg(long)]
    pub snapshot_every: Option<u64>,
    /// Safety cap on ticks (default (N+1)·tau).
    #[arg(long)]
    pub max_steps: Option<u64>,
}

#[derive(Debug, Args)]
pub struct R0Args {
    /// Comma list of infection probabilities.
    #[arg(long)]
    pub p: Option<List<f64>>,
    /// Comma list of lifetimes.
    #[arg(long)]
    pub tau: Option<List<u32>>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long, short = 'L')]
    pub extent: Option<usize>,
    #[arg(long, short = 'N')]
    pub agents: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Comma list of agent counts N.
    #[arg(long, short = 'N')]
    pub agents: Option<List<usize>>,
    #[arg(long, short = 'L')]
    pub extent: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub tau: Option<u32>,
    #[arg(long)]
    pub runs: Option<usize>,
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let file = match &cli.common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    if let Some(recorded) = file.command() {
        if recorded != cli.command.name() {
            return Err(CliError::Config(format!(
                "config file is a `{recorded}` manifest, not `{}`",
                cli.command.name()
            )));
        }
    }
    let mut r = Resolver::new(file);
    match &cli.command {
        Command::Walk(a) => commands::walk(&cli.common, a, &mut r),
        Command::Run(a) => commands::run(&cli.common, a, &mut r),
        Command::R0(a) => commands::r0(&cli.common, a, &mut r),
        Command::Cluster(a) => commands::cluster(&cli.common, a, &mut r),
        Command::Verify => commands::verify(&cli.common, &mut r),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwalk-epi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
