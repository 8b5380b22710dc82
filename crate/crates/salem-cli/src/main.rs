//! salemlab: config-driven experiments on random sparse measures.
//!
//! Subcommands:
//!   salemlab run <config.toml|config.json> [--out-dir DIR]
//!   salemlab plot <run-dir> <decay|brho|holder|multiplier>
//!   salemlab primes --near <N> --factorial-coprime <ell>
//!
//! `SALEMLAB_THREADS` caps the worker pool. Exit codes: 0 all hard
//! assertions pass, 2 soft (asymptotic-regime) warnings only, 1 hard
//! failures, 64 invalid config, 66 missing plot data.

mod config;
mod plot;
mod primes;
mod runner;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "salemlab", version, about = "experiments on random sparse measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write a reproducible run directory.
    Run {
        config: PathBuf,
        /// Root directory for run outputs (default: runs/).
        #[arg(long, default_value = "runs")]
        out_dir: PathBuf,
    },
    /// Emit tidy plot CSV from a completed run.
    Plot { run_dir: PathBuf, functional: String },
    /// Suggest the nearest admissible prime grid side.
    Primes {
        #[arg(long)]
        near: usize,
        /// ell such that gcd(ell!, N) = 1 must hold.
        #[arg(long, default_value_t = 3)]
        factorial_coprime: usize,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SALEMLAB_THREADS") {
        if let Ok(count) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(count.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out_dir } => {
            let parsed = match config::ExperimentConfig::load(&config) {
                Ok(parsed) => parsed,
                Err(error) => {
                    eprintln!("config error: {error:#}");
                    return ExitCode::from(64);
                }
            };
            match runner::execute(&parsed, &out_dir) {
                Ok(outcome) => {
                    println!("run directory: {}", outcome.dir.display());
                    println!(
                        "hard failures: {}, soft warnings: {}",
                        outcome.hard_failures, outcome.soft_warnings
                    );
                    if outcome.hard_failures > 0 {
                        ExitCode::from(1)
                    } else if outcome.soft_warnings > 0 {
                        ExitCode::from(2)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(error) => {
                    eprintln!("run error: {error:#}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Plot { run_dir, functional } => {
            match plot::emit_plotdata(&run_dir, &functional) {
                Ok(path) => {
                    println!("{}", path.display());
                    ExitCode::SUCCESS
                }
                Err(error) => {
                    eprintln!("plot error: {error:#}");
                    ExitCode::from(plot::EXIT_MISSING_DATA as u8)
                }
            }
        }
        Command::Primes { near, factorial_coprime } => {
            let p = primes::nearest_admissible_prime(near, factorial_coprime);
            println!("{p}");
            ExitCode::SUCCESS
        }
    }
}
