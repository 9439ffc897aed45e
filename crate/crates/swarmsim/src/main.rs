//! Thin command-line front end over the library.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use swarmsim::cli::{cmd_run, cmd_sweep, cmd_validate, OUT_DIR_ENV};
use swarmsim::{RunOptions, TrackingMode};

#[derive(Parser)]
#[command(name = "swarmsim", version, about = "Deterministic UAV swarm simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write trajectories.csv, metrics.csv, summary.json
    Run {
        /// Scenario file (JSON)
        #[arg(long)]
        scenario: PathBuf,
        /// Override the scenario's random seed
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: $SWARMSIM_OUT or ./out)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Evaluate agents on a thread pool (results are identical)
        #[arg(long)]
        parallel: bool,
        /// First-order velocity-tracking lag time constant in seconds
        /// (default: ideal tracking)
        #[arg(long)]
        lag_tau: Option<f64>,
    },
    /// Run the scenario across noise scales × seeds and write sweep.csv,
    /// sweep_summary.json
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated multipliers applied to the scenario's sigma_r and
        /// sigma_az
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2,3")]
        scales: Vec<f64>,
        /// Number of seeds per level (scenario seed, seed+1, ...)
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
    },
    /// Check a scenario file and echo its normalized configuration
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn out_dir(explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn options(parallel: bool, lag_tau: Option<f64>) -> RunOptions {
    RunOptions {
        parallel,
        tracking: match lag_tau {
            Some(tau) => TrackingMode::Lag { tau },
            None => TrackingMode::Ideal,
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, seed, out, parallel, lag_tau } => {
            match cmd_run(&scenario, seed, &out_dir(out), &options(parallel, lag_tau)) {
                Ok(outcome) => {
                    let s = &outcome.summary;
                    eprintln!(
                        "{}: {} steps, {} faults, goals reached: {}/{}",
                        s.scenario,
                        s.steps,
                        s.fault_count,
                        s.goals_reached.iter().filter(|g| **g).count(),
                        s.goals_reached.len(),
                    );
                    ExitCode::from(outcome.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Command::Sweep { scenario, scales, seeds, out, parallel } => {
            match cmd_sweep(&scenario, &scales, seeds, &out_dir(out), &options(parallel, None)) {
                Ok(result) => {
                    for level in &result.levels {
                        eprintln!(
                            "sigma_r={:.3} sigma_az={:.3}: median min {:.3} m, median avg {:.3} m",
                            level.sigma_r,
                            level.sigma_az,
                            level.median_run_min,
                            level.median_run_avg,
                        );
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Command::Validate { scenario } => match cmd_validate(&scenario) {
            Ok(normalized) => {
                println!("{normalized}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
