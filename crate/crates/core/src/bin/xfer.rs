//! Command-line front-end: `xfer run|point|check <config.toml>`.
//!
//! Exit codes: 0 success, 1 some sweep points failed, 2 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use xfer::config::{parse_config_with_overrides, Engine, RunConfig};
use xfer::sweep::{point_report, run_sweep};
use xfer::Error;

#[derive(Parser)]
#[command(name = "xfer", version, about = "Polariton-assisted donor-acceptor energy transfer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    config: PathBuf,
    /// `section.key=value`, applied before validation. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// redfield, rate or both
    #[arg(long)]
    engine: Option<Engine>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured sweep and write `<name>.csv` and `<name>.manifest.json`.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Evaluate a single parameter point and print a JSON report.
    Point {
        #[command(flatten)]
        common: Common,
    },
    /// Validate the configuration and print it fully resolved.
    Check {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| Error::Config(format!("{}: {e}", common.config.display())))?;
    let mut overrides = common.overrides.clone();
    if let Some(engine) = common.engine {
        let name = serde_json::to_value(engine)?;
        overrides.push(format!("sweep.engine={name}"));
    }
    parse_config_with_overrides(&text, &overrides)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Run { common, .. } | Command::Point { common } | Command::Check { common } => common,
    };
    let mut config = match load(common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    match cli.command {
        Command::Check { .. } => match serde_json::to_string_pretty(&config) {
            Ok(s) => {
                println!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
        Command::Point { .. } => {
            let report = point_report(&config).and_then(|r| Ok(serde_json::to_string_pretty(&r)?));
            match report {
                Ok(s) => {
                    println!("{s}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("point failed: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Run { workers, out_dir, .. } => {
            if let Some(w) = workers {
                if w == 0 {
                    eprintln!("config error: workers must be at least 1");
                    return ExitCode::from(2);
                }
                config.sweep.worker_count = w;
            }
            if let Some(dir) = out_dir {
                config.sweep.output_dir = dir;
            }
            let output = match run_sweep(&config) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            match output.write(&config.sweep.output_dir) {
                Ok((csv, manifest)) => {
                    eprintln!(
                        "{} points, {} failed: {} {}",
                        output.manifest.n_points,
                        output.failures(),
                        csv.display(),
                        manifest.display()
                    );
                }
                Err(e) => {
                    eprintln!("cannot write output: {e}");
                    return ExitCode::from(1);
                }
            }
            if output.failures() > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
