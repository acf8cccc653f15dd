//! `ladder` — price laddered-strategy options from a JSON config.
//!
//! Exit codes: 0 success (and mc-check PASS), 2 config error,
//! 3 numeric error, 4 Monte Carlo mismatch.

mod commands;
mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CmdError, McCheckHooks};
use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "ladder",
    version,
    about = "Pricing for options on discrete linear investment strategies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Path to a JSON run configuration
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form price with discount, vanilla reference, and band table
    Price {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Sweep one parameter and emit a CSV table
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the closed form against both Monte Carlo estimators
    McCheck {
        #[command(flatten)]
        config: ConfigArg,
        /// Override the seed from the config
        #[arg(long)]
        seed: Option<u64>,
        /// Override the path count from the config
        #[arg(long)]
        paths: Option<u64>,
        /// Override the step count from the config
        #[arg(long)]
        steps: Option<u32>,
        /// Shift the sampling law's log-mean (testing hook)
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_log_mean: f64,
    },
}

fn load_config(path: &PathBuf) -> Result<RunConfig, CmdError> {
    let text = fs::read_to_string(path).map_err(|e| CmdError {
        exit_code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| CmdError {
        exit_code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn run(cli: Cli) -> Result<ExitCode, CmdError> {
    match cli.command {
        Command::Price { config } => {
            let cfg = load_config(&config.config)?;
            print!("{}", commands::cmd_price(&cfg)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config, out } => {
            let cfg = load_config(&config.config)?;
            let csv = commands::cmd_sweep(&cfg)?;
            match out {
                Some(path) => fs::write(&path, csv).map_err(|e| CmdError {
                    exit_code: 2,
                    message: format!("{}: {e}", path.display()),
                })?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::McCheck {
            config,
            seed,
            paths,
            steps,
            perturb_log_mean,
        } => {
            let mut cfg = load_config(&config.config)?;
            if let Some(mc) = cfg.mc.as_mut() {
                if let Some(s) = seed {
                    mc.seed = s;
                }
                if let Some(p) = paths {
                    mc.n_paths = p;
                }
                if let Some(n) = steps {
                    mc.n_steps = n;
                }
            }
            let hooks = McCheckHooks { perturb_log_mean };
            let report = commands::cmd_mc_check(&cfg, &hooks)?;
            print!("{}", report.text);
            if report.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(4))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.exit_code)
        }
    }
}
