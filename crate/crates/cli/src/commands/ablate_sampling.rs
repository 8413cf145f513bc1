//! `ragrank ablate-sampling`: how much judging can be skipped before the
//! leaderboard degrades — rank correlation against the full-data fit over a
//! (query count x match fraction) grid.

use anyhow::{bail, Result};
use clap::Args;
use ragrank_core::{PairwiseJudgment, RngSeed};

use crate::ablate::ablate_sampling;
use crate::commands::{Ctx, ABLATE_SAMPLING_CSV};
use crate::io::{csv_float, read_jsonl, write_csv, JudgmentRow};
use crate::meta::RunMeta;

#[derive(Args, Debug, Clone)]
pub struct SamplingArgs {
    /// Comma-separated query counts to subsample to.
    #[arg(long, value_delimiter = ',', default_values_t = vec![20, 50, 100])]
    pub queries_grid: Vec<usize>,

    /// Comma-separated judgment retention fractions in (0, 1].
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.5, 1.0])]
    pub fractions: Vec<f64>,

    /// Seeded repeats per grid cell.
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
}

pub fn run(ctx: &Ctx, args: &SamplingArgs) -> Result<()> {
    let judgments_path = ctx.judgments_input()?;
    let rows: Vec<JudgmentRow> = read_jsonl(&judgments_path)?;
    if rows.is_empty() {
        bail!("judgment pool {} is empty", judgments_path.display());
    }
    let pool: Vec<PairwiseJudgment> = rows
        .into_iter()
        .map(JudgmentRow::into_judgment)
        .collect::<Result<_>>()?;

    let ablation = ablate_sampling(
        &pool,
        &args.queries_grid,
        &args.fractions,
        args.repeats,
        &ctx.config.tournament.fit,
        RngSeed(ctx.seed),
    )?;

    let csv_rows: Vec<Vec<String>> = ablation
        .cells
        .iter()
        .map(|cell| {
            vec![
                cell.n_queries.to_string(),
                csv_float(cell.match_fraction),
                csv_float(cell.mean_tau),
                csv_float(cell.sd_tau),
                cell.n_repeats.to_string(),
                cell.n_failed.to_string(),
            ]
        })
        .collect();
    write_csv(
        &ctx.artifact(ABLATE_SAMPLING_CSV),
        &[
            "n_queries",
            "match_fraction",
            "mean_tau",
            "sd_tau",
            "n_repeats",
            "n_failed",
        ],
        &csv_rows,
    )?;

    RunMeta::new("ablate-sampling", ctx.seed)
        .stream(
            "ablate-sampling-q{n}-f{fraction}-r{repeat}",
            ablation.cells.len() * ablation.repeats_per_cell,
        )
        .input_named(ctx.judgments_meta_key(), &judgments_path)?
        .write(&ctx.out)?;

    println!(
        "ablate-sampling: {} cell(s) x {} repeat(s) -> {}",
        ablation.cells.len(),
        ablation.repeats_per_cell,
        ctx.out.display()
    );
    Ok(())
}
