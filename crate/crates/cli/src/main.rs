use std::path::PathBuf;
use std::process::ExitCode;

use asv_gain::model::ModelKind;
use asv_gain_cli::{commands, RunConfig};
use clap::{Parser, Subcommand};

/// Identification of twin-thruster vessel input gains from logged data.
#[derive(Debug, Parser)]
#[command(name = "asv-gain", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Propeller model: static or dynamic.
    #[arg(long, global = true)]
    kind: Option<ModelKind>,
    /// Seed for partitions, excitation and noise.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Raw GNSS, heading and PWM logs to a prepared dataset.
    Prepare,
    /// Prepared dataset to a model file.
    Identify,
    /// One-step prediction metrics, traces and sensitivity studies.
    Validate,
    /// Synthetic logs with their ground truth.
    Simulate,
    /// Tables of the metrics files.
    Report,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let run = || {
        let mut cfg = RunConfig::load(cli.config.as_deref())?;
        cfg.apply_overrides(cli.kind, cli.seed, cli.out.clone());
        cfg.validate()?;
        match cli.command {
            Command::Prepare => commands::cmd_prepare(&cfg),
            Command::Identify => commands::cmd_identify(&cfg),
            Command::Validate => commands::cmd_validate(&cfg),
            Command::Simulate => commands::cmd_simulate(&cfg),
            Command::Report => commands::cmd_report(&cfg),
        }
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
