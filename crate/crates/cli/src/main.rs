use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dispersive_lab_cli::config::{ExperimentConfig, COMMON_KEYS};
use dispersive_lab_cli::experiments::EXPERIMENTS;
use dispersive_lab_cli::run::{run_experiment, validate, RunError};

#[derive(Parser)]
#[command(name = "dlab", version, about = "Spectral laboratory experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV files and manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override a key, `key=value`; may repeat.
        #[arg(long = "set")]
        set: Vec<String>,
    },
    /// Print every experiment with its keys and defaults.
    ListExperiments,
    /// Check a configuration without computing.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "set")]
        set: Vec<String>,
    },
}

fn load(path: &PathBuf, set: &[String]) -> Result<ExperimentConfig, RunError> {
    Ok(ExperimentConfig::from_file(path, set)?)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(n) = std::env::var("DLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("cannot set thread count: {e}");
        }
    }
    let result = match Cli::parse().command {
        Command::ListExperiments => {
            for e in EXPERIMENTS {
                println!("{}  {}", e.name, e.summary);
                for k in COMMON_KEYS.iter().chain(e.keys) {
                    println!("    {:<12} = {:<24} {}", k.name, k.default.to_string(), k.doc);
                }
            }
            Ok(())
        }
        Command::Validate { config, set } => load(&config, &set).and_then(|c| validate(&c)).map(|_| println!("ok")),
        Command::Run { config, set } => load(&config, &set).and_then(|c| run_experiment(&c)).map(|paths| {
            for p in paths {
                println!("{}", p.display());
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
