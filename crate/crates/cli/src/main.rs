use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ddforge::commands;
use ddforge::{CliResult, LoadedConfig};

#[derive(Parser)]
#[command(name = "ddforge", version, about = "Genetic search for dynamical decoupling strategies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "ddforge-out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run the GA and compare its best strategy with the baselines.
    Train {
        #[command(flatten)]
        common: Common,
        /// Continue from a checkpoint written by an earlier run.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Score no-DD, the canonical baselines and an optional saved strategy.
    CompareBaselines {
        #[command(flatten)]
        common: Common,
    },
    /// Fit error per layer against MRB width for every strategy.
    MrbScan {
        #[command(flatten)]
        common: Common,
    },
    /// Count sequences reached by the GA operators on random landscapes.
    Explore {
        #[command(flatten)]
        common: Common,
    },
    /// Re-score a saved population under perturbed noise.
    Replay {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Write the configured workload circuits as JSON.
    Workload {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common) -> CliResult<LoadedConfig> {
    let mut lc = LoadedConfig::load(&common.config)?;
    if let Some(s) = common.seed {
        lc.config.seed = s;
    }
    Ok(lc)
}

fn run(cli: Cli) -> CliResult<String> {
    let msg = |out: &Path| format!("report written to {}", out.join("report.json").display());
    Ok(match cli.command {
        Command::Train { common, resume } => {
            let r = commands::train::run(&load(&common)?, &common.out, resume.as_deref())?;
            let margin = r.gadd_margin.map(|m| format!("{m:+.4}")).unwrap_or_else(|| "n/a".into());
            format!("best {} (margin over best baseline {margin}); {}", r.best_strategy_label, msg(&common.out))
        }
        Command::CompareBaselines { common } => {
            commands::compare::run(&load(&common)?, &common.out)?;
            msg(&common.out)
        }
        Command::MrbScan { common } => {
            commands::mrb_scan::run(&load(&common)?, &common.out)?;
            msg(&common.out)
        }
        Command::Explore { common } => {
            commands::explore::run(&load(&common)?, &common.out)?;
            msg(&common.out)
        }
        Command::Replay { common, checkpoint } => {
            let r = commands::replay::run(&load(&common)?, &common.out, checkpoint.as_deref())?;
            format!("ranking preserved: {}; {}", r.ranking_preserved, msg(&common.out))
        }
        Command::Workload { common } => {
            let n = commands::workload::run(&load(&common)?, &common.out)?;
            format!("{n} circuits written to {}", common.out.display())
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
