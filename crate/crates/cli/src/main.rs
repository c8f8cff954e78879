mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coherence::model::ModelKind;
use coherence::tree_model::AblationConfig;

use config::GlobalConfig;
use error::{CliError, CliResult};

/// Discourse-coherence classification with RST-Recursive, ParSeq and
/// their ensemble.
#[derive(Parser)]
#[command(name = "coherence", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

/// Command-line settings that take precedence over the config file.
#[derive(Args, Debug, Default)]
pub struct Overrides {
    /// JSON config file; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_model)]
    pub model: Option<ModelKind>,
    /// Feature set such as `t,ns,r,e`.
    #[arg(long, global = true, value_parser = parse_features)]
    pub features: Option<AblationConfig>,
    #[arg(long, global = true)]
    pub runs: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: coherence::Error| e.to_string())
}

fn parse_features(s: &str) -> Result<AblationConfig, String> {
    s.parse().map_err(|e: coherence::Error| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Train over several seeds and report mean and 95% interval.
    Train,
    /// Score a checkpoint on the configured test split.
    Evaluate {
        #[arg(long)]
        checkpoint: PathBuf,
    },
    /// Run the majority baseline and every legal model/feature row.
    Ablate,
    /// Write a synthetic corpus in the ingestion formats.
    Synth,
    /// Check every tree in a tree file.
    ValidateTrees { trees: PathBuf },
}

fn run(cli: Cli) -> CliResult<(String, bool)> {
    let load = || GlobalConfig::load(cli.overrides.config.as_deref(), &cli.overrides);
    match &cli.command {
        Command::Train => Ok((commands::train_eval(&load()?)?, true)),
        Command::Evaluate { checkpoint } => Ok((commands::evaluate(&load()?, checkpoint)?, true)),
        Command::Ablate => Ok((commands::ablate(&load()?)?, true)),
        Command::Synth => Ok((commands::synth(&load()?)?, true)),
        Command::ValidateTrees { trees } => commands::validate_trees(trees),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", CliError::Config(first.trim_start_matches("error: ").to_string()).to_json_line());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok((out, true)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok((out, false)) => {
            print!("{out}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            ExitCode::from(e.exit_code())
        }
    }
}
