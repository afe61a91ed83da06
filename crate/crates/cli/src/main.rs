//! `billiard`: reproducible spectral-statistics experiments for
//! rectangular quantum billiards.
//!
//! Subcommands:
//! - `spectrum`          dump one billiard's raw and unfolded levels
//! - `run <experiment>`  run a named experiment and write its CSV dataset
//! - `list-experiments`  print the valid experiment names
//!
//! On failure the process exits nonzero after printing a single line
//! `error: <category>: <message>` to stderr.

mod config;
mod csv_out;
mod experiments;

use clap::{Parser, Subcommand};
use config::Config;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "billiard",
    version,
    about = "Spectral-fluctuation statistics of rectangular billiards"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonFlags {
    /// Flat key = value configuration file with # comments.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Ensemble seed; overrides the `seed` config key.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output CSV path; defaults to `<experiment>.csv` / `spectrum.csv`.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dump one billiard's raw and unfolded spectrum as CSV.
    Spectrum {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run a named experiment and write its CSV dataset.
    Run {
        /// Experiment name; see `list-experiments`.
        experiment: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Print the valid experiment names, one per line.
    ListExperiments,
}

fn load_config(flags: &CommonFlags) -> billiard_core::Result<Config> {
    let mut cfg = match &flags.config {
        Some(path) => Config::from_file(path)?,
        None => Config::default(),
    };
    if let Some(seed) = flags.seed {
        cfg.set("seed", seed.to_string());
    }
    Ok(cfg)
}

fn real_main() -> billiard_core::Result<()> {
    match Cli::parse().command {
        Command::Spectrum { flags } => {
            let cfg = load_config(&flags)?;
            let out = flags.out.unwrap_or_else(|| PathBuf::from("spectrum.csv"));
            experiments::run_spectrum(&cfg, &out)?;
            println!("wrote {}", out.display());
        }
        Command::Run { experiment, flags } => {
            let cfg = load_config(&flags)?;
            let out = flags
                .out
                .unwrap_or_else(|| PathBuf::from(format!("{experiment}.csv")));
            experiments::run(&experiment, &cfg, &out)?;
            println!("wrote {}", out.display());
        }
        Command::ListExperiments => {
            for name in experiments::EXPERIMENTS {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
