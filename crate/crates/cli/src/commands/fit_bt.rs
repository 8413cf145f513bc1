//! `ragrank fit-bt`: bootstrap Bradley-Terry tournaments over the judgment
//! pool and emit the fit plus a rank-ordered leaderboard.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use ragrank_arena::{bootstrap_bt, to_leaderboard, TournamentConfig};
use ragrank_core::{ModelId, PairwiseJudgment, RngSeed};

use crate::commands::{Ctx, BT_FIT_JSON, LEADERBOARD_CSV};
use crate::io::{csv_float, read_jsonl, write_csv, write_json_pretty, JudgmentRow};
use crate::meta::RunMeta;

pub fn run(ctx: &Ctx) -> Result<()> {
    let judgments_path = ctx.judgments_input()?;
    let rows: Vec<JudgmentRow> = read_jsonl(&judgments_path)?;
    if rows.is_empty() {
        bail!("judgment pool {} is empty", judgments_path.display());
    }
    let pool: Vec<PairwiseJudgment> = rows
        .into_iter()
        .map(JudgmentRow::into_judgment)
        .collect::<Result<_>>()?;

    let mut queries: Vec<String> = pool.iter().map(|j| j.query_id.clone()).collect();
    queries.sort();
    queries.dedup();

    let knobs = &ctx.config.tournament;
    let config = TournamentConfig {
        n_tournaments: knobs.n_tournaments,
        n_queries: knobs.n_queries.unwrap_or(queries.len()),
        match_fraction: knobs.match_fraction,
        seed: RngSeed(ctx.seed),
        fit: knobs.fit.clone(),
    };
    let fit = bootstrap_bt(&pool, &queries, &config)?;
    if fit.n_failed > 0 {
        eprintln!(
            "warning: {}/{} tournament(s) failed to fit (disconnected resamples) \
             and were excluded",
            fit.n_failed, fit.n_tournaments
        );
    }
    if fit.n_unconverged > 0 {
        eprintln!(
            "warning: {} tournament(s) stopped at the iteration cap before \
             reaching tolerance",
            fit.n_unconverged
        );
    }

    write_json_pretty(&ctx.artifact(BT_FIT_JSON), &fit)?;

    let scores: BTreeMap<ModelId, f64> = fit
        .models
        .iter()
        .cloned()
        .zip(fit.mean.iter().copied())
        .collect();
    let board = to_leaderboard(&scores)?;
    let rows: Vec<Vec<String>> = board
        .entries
        .iter()
        .map(|entry| {
            let index = fit
                .models
                .binary_search(&entry.model_id)
                .expect("leaderboard models come from the fit roster");
            vec![
                entry.model_id.to_string(),
                csv_float(fit.mean[index]),
                csv_float(fit.ci_low_offset[index]),
                csv_float(fit.ci_high_offset[index]),
            ]
        })
        .collect();
    write_csv(
        &ctx.artifact(LEADERBOARD_CSV),
        &["model", "mean", "ci_low_offset", "ci_high_offset"],
        &rows,
    )?;

    RunMeta::new("fit-bt", ctx.seed)
        .stream("tournament-{index}", fit.n_tournaments)
        .input_named(ctx.judgments_meta_key(), &judgments_path)?
        .write(&ctx.out)?;

    println!(
        "fit-bt: {} models over {} judgments, {} tournaments -> {}",
        fit.models.len(),
        pool.len(),
        fit.n_tournaments,
        ctx.out.display()
    );
    Ok(())
}
