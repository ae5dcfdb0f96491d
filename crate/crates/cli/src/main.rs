use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use upset_cli::commands::{self, *};
use upset_cli::{CliResult, PipelineConfig};

/// Upset prediction from pre-game fan sentiment, with betting backtests.
///
/// Exit codes: 0 success, 2 parse error, 3 validation error, 4 runtime error.
#[derive(Debug, Parser)]
#[command(name = "upset", version)]
struct Cli {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a configuration key; repeatable (`--set theta=4.5`).
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Master seed; overrides `seed` from the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score games and keep the potential upsets, labeled when the outcome is known.
    Select(SelectArgs),
    /// Compute per-window U-test p-value features for potential upsets.
    Featurize(FeaturizeArgs),
    /// Cross-validate the naive Bayes classifier on a features file.
    Evaluate(EvaluateArgs),
    /// Backtest the betting strategy and the fixed reference strategies.
    Bet(BetArgs),
    /// Generate a synthetic games, tweets and tags corpus.
    Synth(SynthArgs),
    /// Per-minute in-game volume and sentiment for one game.
    Signals(SignalsArgs),
    /// Accuracy of the sentiment scorer on a labeled corpus.
    BenchSentiment(BenchArgs),
    /// Per-window counts of games whose p-value is below `alpha`.
    Significance(SignificanceArgs),
    /// Print the effective configuration.
    Config,
}

fn run(cli: Cli) -> CliResult<String> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    cfg.apply_overrides(&cli.overrides)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    match &cli.command {
        Command::Select(a) => cmd_select(a, &cfg),
        Command::Featurize(a) => cmd_featurize(a, &cfg),
        Command::Evaluate(a) => cmd_evaluate(a, &cfg),
        Command::Bet(a) => cmd_bet(a, &cfg),
        Command::Synth(a) => commands::cmd_synth(a, &cfg),
        Command::Signals(a) => cmd_signals(a, &cfg),
        Command::BenchSentiment(a) => cmd_bench_sentiment(a, &cfg),
        Command::Significance(a) => cmd_significance(a, &cfg),
        Command::Config => Ok(cfg.echo()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
