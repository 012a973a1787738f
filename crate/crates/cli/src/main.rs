// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliResult;

/// Heralded quantum lattice-Boltzmann experiments.
#[derive(Debug, Parser)]
#[command(name = "qlbm", version, about)]
struct Cli {
    /// Print numerical residuals of the run as JSON on stdout.
    #[arg(long, global = true)]
    precision_report: bool,
    /// Seed overriding the one in the command or config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split exp(M dt) into U_alpha + gamma U_beta.
    Decompose(commands::decompose::DecomposeArgs),
    /// Success probability against substep count and weight ratio.
    Fig2(commands::figures::Fig2Args),
    /// Collision spectrum and weight window against the time step.
    Fig3(commands::figures::Fig3Args),
    /// Classical lattice-Boltzmann runs.
    Lb {
        #[command(subcommand)]
        action: RunAction,
    },
    /// Heralded statevector runs.
    Qsim {
        #[command(subcommand)]
        action: RunAction,
    },
    /// Check a protocol run against the classical reference.
    Compare(commands::compare::CompareArgs),
}

#[derive(Debug, Subcommand)]
enum RunAction {
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (defaults to $QLBM_OUT_DIR or the working directory).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Also write the full final density (lb) or amplitude tensor (qsim).
    #[arg(long)]
    pub dump: bool,
}

fn dispatch(cli: Cli) -> CliResult<Option<serde_json::Value>> {
    let seed = cli.seed;
    match cli.command {
        Command::Decompose(args) => commands::decompose::run(&args),
        Command::Fig2(args) => commands::figures::fig2(&args, seed),
        Command::Fig3(args) => commands::figures::fig3(&args),
        Command::Lb {
            action: RunAction::Run(args),
        } => commands::lb::run(&args),
        Command::Qsim {
            action: RunAction::Run(args),
        } => commands::qsim::run(&args, seed),
        Command::Compare(args) => commands::compare::run(&args, seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let report = cli.precision_report;
    match dispatch(cli) {
        Ok(precision) => {
            if let (true, Some(p)) = (report, precision) {
                println!("{p}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qlbm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
