//! Command-line driver: simulation runs, certification reports, analytic
//! predictions, characterization tools, and built-in oracle suites.

mod commands;
mod config;
mod error;
mod io;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliResult;

/// Master seed used when --seed is omitted. A fixed value (never the
/// clock) keeps unseeded invocations reproducible.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(
    name = "bosonic",
    version,
    about = "Squeezed-light sampling, certification, and characterization",
    after_help = "Exit codes: 0 success, 2 usage/config error, 3 resource/budget error, 4 numeric failure."
)]
pub struct Cli {
    /// Master RNG seed; the default is fixed, not wall-clock.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Output path (each command documents its default).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker thread count; defaults to all cores. Outputs do not depend
    /// on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print extra diagnostics.
    #[arg(long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Draw samples from a configured experiment into a JSONL file.
    Simulate {
        /// Experiment config (TOML).
        config: PathBuf,
        /// Shots to draw across the block schedule.
        #[arg(long)]
        shots: u64,
    },
    /// Time-binned nonclassicality certification of a sample file.
    Certify {
        /// Sample file from `simulate` (.jsonl or .jsonl.gz).
        samples: PathBuf,
        /// Shots per certification bin.
        #[arg(long, default_value_t = 10_000)]
        bin_size: u64,
        /// Bootstrap resampling rounds per bin.
        #[arg(long, default_value_t = bosonic_core::certifier::DEFAULT_BOOTSTRAP_ROUNDS)]
        rounds: u32,
    },
    /// Analytic expectations for a config, no sampling involved.
    Predict {
        /// Experiment config (TOML).
        config: PathBuf,
    },
    /// Characterization tools for counts, scans, and efficiency data.
    Analyze {
        #[command(subcommand)]
        what: AnalyzeCommand,
    },
    /// Built-in cross-validation suites (brute-force reference checks).
    Oracle {
        /// permanent | hafnian | fock | blinding | criterion | all
        suite: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Arm {
    Signal,
    Herald,
}

#[derive(Subcommand)]
pub enum AnalyzeCommand {
    /// Second-order correlation g2(0) of one detection channel.
    G2 {
        /// Sample file; photon counts are tallied from one mode and arm.
        samples: Option<PathBuf>,
        /// Inline alternative: comma-separated counts for n = 0, 1, 2, ...
        #[arg(long, conflicts_with = "samples")]
        counts: Option<String>,
        /// Mode index within the pattern.
        #[arg(long, default_value_t = 0)]
        mode: usize,
        /// Which detection arm to tally.
        #[arg(long, value_enum, default_value_t = Arm::Signal)]
        arm: Arm,
    },
    /// Gaussian dip fit of a two-photon interference scan.
    Hom {
        /// CSV with rows `delay,coincidences`.
        scan: PathBuf,
    },
    /// Heralded efficiency estimates from coincidence counting.
    Klyshko {
        /// CSV with one row per mode: `coincidences,herald_singles,signal_singles`.
        counts: PathBuf,
    },
    /// Visibility loss from group-velocity dispersion.
    Dispersion {
        /// Two-photon correlation time in picoseconds.
        #[arg(long)]
        tau0_ps: f64,
        /// Group-velocity dispersion in fs^2 per mm (often negative).
        #[arg(long, allow_negative_numbers = true)]
        gvd_fs2_mm: f64,
        /// Fiber length mismatch in meters.
        #[arg(long, allow_negative_numbers = true)]
        length_m: f64,
    },
    /// Squeezing parameter from loss-corrected mean photon numbers.
    Squeezing {
        /// Comma-separated per-mode detected mean photon numbers.
        #[arg(long)]
        means: String,
        /// Comma-separated per-mode efficiencies; one value broadcasts.
        #[arg(long)]
        eta: String,
    },
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Simulate { config, shots } => commands::simulate::run(cli, config, *shots),
        Command::Certify {
            samples,
            bin_size,
            rounds,
        } => commands::certify::run(cli, samples, *bin_size, *rounds),
        Command::Predict { config } => commands::predict::run(cli, config),
        Command::Analyze { what } => commands::analyze::run(cli, what),
        Command::Oracle { suite } => commands::oracle::run(cli, suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        if let Err(e) = pool {
            eprintln!("error: thread pool: {}", e);
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
