//! `ragrank` — heuristic features, judged tournaments, and a surrogate
//! ranking model, as one pipeline over a shared output directory.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use ragrank_cli::commands::ablate_features::FeatureAblationArgs;
use ragrank_cli::commands::ablate_sampling::SamplingArgs;
use ragrank_cli::commands::simulate::SimulateArgs;
use ragrank_cli::commands::{self, Ctx};
use ragrank_cli::config::RunConfig;
use ragrank_cli::io::ensure_dir;

/// Exit code when the judge run completed but some comparisons were
/// rejected: results are usable, coverage is not what was asked for.
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ragrank",
    version,
    about = "Rank answer generators: heuristic features, judged tournaments, \
             and a surrogate ranking model"
)]
struct Cli {
    /// Run-configuration JSON file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed override (default: the config's seed).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory override (default: the config's "out").
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute per-model feature vectors from queries, responses, gold
    /// answers, and external scores.
    Features,
    /// Collect pairwise verdicts from the configured judge endpoint.
    Judge,
    /// Fit bootstrap tournaments over the judgment pool and emit a
    /// leaderboard.
    FitBt,
    /// Train the feature-to-strength forest and validate it against the
    /// tournament fit.
    Surrogate,
    /// Measure leaderboard stability as queries and matches are subsampled.
    AblateSampling(SamplingArgs),
    /// Retrain the surrogate under each feature subset and compare.
    AblateFeatures(FeatureAblationArgs),
    /// Consolidate a run directory into markdown + JSON reports.
    Report,
    /// Generate a synthetic world with known true strengths.
    Simulate(SimulateArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let seed = cli.seed.unwrap_or(config.seed);
    let out = cli
        .out
        .clone()
        .or_else(|| config.out.clone())
        .context("an output directory is required: pass --out or set \"out\" in the config")?;
    ensure_dir(&out)?;
    let ctx = Ctx { config, seed, out };

    match &cli.command {
        Command::Features => commands::features::run(&ctx)?,
        Command::Judge => {
            let summary = commands::judge::run(&ctx)?;
            if summary.rejected > 0 {
                eprintln!(
                    "judge finished with {} reject(s) out of {}; see rejects.jsonl",
                    summary.rejected,
                    summary.judged + summary.rejected
                );
                return Ok(ExitCode::from(EXIT_PARTIAL));
            }
        }
        Command::FitBt => commands::fit_bt::run(&ctx)?,
        Command::Surrogate => commands::surrogate::run(&ctx)?,
        Command::AblateSampling(args) => commands::ablate_sampling::run(&ctx, args)?,
        Command::AblateFeatures(args) => commands::ablate_features::run(&ctx, args)?,
        Command::Report => commands::report::run(&ctx)?,
        Command::Simulate(args) => commands::simulate::run(&ctx, args)?,
    }
    Ok(ExitCode::SUCCESS)
}
