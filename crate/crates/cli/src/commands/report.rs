//! `ragrank report`: consolidate whatever artifacts a run directory holds
//! into one machine-readable JSON report and a human-readable markdown
//! twin. Regeneration is idempotent: the report files themselves are
//! excluded from the input scan, and nothing time- or host-dependent is
//! written.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use anyhow::{bail, Context, Result};
use ragrank_arena::{to_leaderboard, BtFit};
use ragrank_core::ModelId;
use ragrank_surrogate::PipelineReport;
use serde::{Deserialize, Serialize};

use crate::commands::{
    Ctx, ABLATE_FEATURES_CSV, ABLATE_SAMPLING_CSV, BT_FIT_JSON, REPORT_JSON, REPORT_MD,
    SURROGATE_REPORT_JSON,
};
use crate::io::{read_json, sha256_hex, write_json_pretty, write_text};
use crate::meta::RunMeta;

/// Files the report writes; never hashed as inputs, or regeneration would
/// chase its own tail.
const REPORT_OWN_FILES: [&str; 3] = [REPORT_MD, REPORT_JSON, "report.meta.json"];

#[derive(Debug, Serialize)]
struct InputHash {
    file: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct BoardRow {
    rank: usize,
    model: String,
    mean: f64,
    ci_low_offset: f64,
    ci_high_offset: f64,
}

#[derive(Debug, Serialize)]
struct ImportanceRow {
    feature: String,
    weight: f64,
}

#[derive(Debug, Serialize)]
struct PerTournamentSummary {
    mean: f64,
    ci_low: f64,
    ci_high: f64,
    n_fits: usize,
    n_skipped: usize,
}

#[derive(Debug, Serialize)]
struct SurrogateSummary {
    tau_vs_bt: f64,
    holdout_r2: Option<f64>,
    holdout_models: Vec<String>,
    per_tournament_r2: Option<PerTournamentSummary>,
    importance: Vec<ImportanceRow>,
    warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
struct RankPair {
    model: String,
    bt_rank: usize,
    surrogate_rank: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SamplingRow {
    n_queries: usize,
    match_fraction: f64,
    mean_tau: f64,
    sd_tau: f64,
    n_repeats: usize,
    n_failed: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct SubsetRow {
    subset: String,
    n_features: usize,
    tau_vs_bt: f64,
    holdout_r2: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Report {
    inputs: Vec<InputHash>,
    leaderboard: Option<Vec<BoardRow>>,
    surrogate: Option<SurrogateSummary>,
    rank_pairs: Option<Vec<RankPair>>,
    sampling: Option<Vec<SamplingRow>>,
    feature_subsets: Option<Vec<SubsetRow>>,
    runs: Vec<serde_json::Value>,
}

pub fn run(ctx: &Ctx) -> Result<()> {
    let mut inputs: Vec<InputHash> = Vec::new();
    let mut runs: Vec<(String, serde_json::Value)> = Vec::new();
    for entry in fs::read_dir(&ctx.out)
        .with_context(|| format!("reading output directory {}", ctx.out.display()))?
    {
        let entry = entry?;
        if !entry.file_type()?.is_file() {
            continue;
        }
        let name = entry.file_name().to_string_lossy().into_owned();
        if REPORT_OWN_FILES.contains(&name.as_str()) {
            continue;
        }
        inputs.push(InputHash {
            sha256: sha256_hex(&entry.path())?,
            file: name.clone(),
        });
        if name.ends_with(".meta.json") {
            runs.push((name, read_json(&entry.path())?));
        }
    }
    if inputs.is_empty() {
        bail!(
            "output directory {} holds no artifacts to report on; run a \
             pipeline stage first",
            ctx.out.display()
        );
    }
    inputs.sort_by(|a, b| a.file.cmp(&b.file));
    runs.sort_by(|a, b| a.0.cmp(&b.0));
    let runs: Vec<serde_json::Value> = runs.into_iter().map(|(_, value)| value).collect();

    let fit: Option<BtFit> = {
        let path = ctx.artifact(BT_FIT_JSON);
        path.is_file().then(|| read_json(&path)).transpose()?
    };
    let surrogate: Option<PipelineReport> = {
        let path = ctx.artifact(SURROGATE_REPORT_JSON);
        path.is_file().then(|| read_json(&path)).transpose()?
    };

    let leaderboard = fit.as_ref().map(board_rows).transpose()?;
    let rank_pairs = match (&fit, &surrogate) {
        (Some(fit), Some(report)) => Some(rank_pairs(fit, report)?),
        _ => None,
    };
    let surrogate_summary = surrogate.as_ref().map(summarize_surrogate);

    let sampling: Option<Vec<SamplingRow>> = read_csv_rows(ctx, ABLATE_SAMPLING_CSV)?;
    let feature_subsets: Option<Vec<SubsetRow>> = read_csv_rows(ctx, ABLATE_FEATURES_CSV)?;

    let report = Report {
        inputs,
        leaderboard,
        surrogate: surrogate_summary,
        rank_pairs,
        sampling,
        feature_subsets,
        runs,
    };
    write_json_pretty(&ctx.artifact(REPORT_JSON), &report)?;
    write_text(&ctx.artifact(REPORT_MD), &render_markdown(&report))?;
    RunMeta::new("report", ctx.seed).write(&ctx.out)?;

    println!(
        "report: {} input file(s) consolidated -> {}",
        report.inputs.len(),
        ctx.out.display()
    );
    Ok(())
}

fn board_rows(fit: &BtFit) -> Result<Vec<BoardRow>> {
    let scores: BTreeMap<ModelId, f64> = fit
        .models
        .iter()
        .cloned()
        .zip(fit.mean.iter().copied())
        .collect();
    let board = to_leaderboard(&scores)?;
    Ok(board
        .entries
        .iter()
        .map(|entry| {
            let index = fit
                .models
                .binary_search(&entry.model_id)
                .expect("board models come from the fit roster");
            BoardRow {
                rank: entry.rank,
                model: entry.model_id.to_string(),
                mean: fit.mean[index],
                ci_low_offset: fit.ci_low_offset[index],
                ci_high_offset: fit.ci_high_offset[index],
            }
        })
        .collect())
}

fn rank_pairs(fit: &BtFit, report: &PipelineReport) -> Result<Vec<RankPair>> {
    let scores: BTreeMap<ModelId, f64> = fit
        .models
        .iter()
        .cloned()
        .zip(fit.mean.iter().copied())
        .collect();
    let board = to_leaderboard(&scores)?;
    Ok(board
        .entries
        .iter()
        .map(|entry| RankPair {
            model: entry.model_id.to_string(),
            bt_rank: entry.rank,
            surrogate_rank: report.predicted_board.rank_of(&entry.model_id),
        })
        .collect())
}

fn summarize_surrogate(report: &PipelineReport) -> SurrogateSummary {
    let mut importance: Vec<ImportanceRow> = report
        .forest
        .feature_names
        .iter()
        .zip(report.forest.importance.iter())
        .map(|(feature, &weight)| ImportanceRow {
            feature: feature.as_str().to_string(),
            weight,
        })
        .collect();
    importance.sort_by(|a, b| {
        b.weight
            .partial_cmp(&a.weight)
            .expect("importance weights are finite")
            .then_with(|| a.feature.cmp(&b.feature))
    });
    SurrogateSummary {
        tau_vs_bt: report.tau_vs_bt,
        holdout_r2: report.holdout_r2,
        holdout_models: report
            .holdout_models
            .iter()
            .map(ModelId::to_string)
            .collect(),
        per_tournament_r2: report.per_tournament_r2.as_ref().map(|r| {
            PerTournamentSummary {
                mean: r.mean,
                ci_low: r.ci_low,
                ci_high: r.ci_high,
                n_fits: r.values.len(),
                n_skipped: r.n_skipped,
            }
        }),
        importance,
        warnings: report.warnings.clone(),
    }
}

fn read_csv_rows<T: for<'de> Deserialize<'de>>(ctx: &Ctx, name: &str) -> Result<Option<Vec<T>>> {
    let path = ctx.artifact(name);
    if !path.is_file() {
        return Ok(None);
    }
    let mut reader = csv::Reader::from_path(&path)
        .with_context(|| format!("opening {}", path.display()))?;
    let rows: Vec<T> = reader
        .deserialize()
        .collect::<Result<_, _>>()
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(Some(rows))
}

fn render_markdown(report: &Report) -> String {
    let mut md = String::new();
    md.push_str("# Evaluation report\n");

    if let Some(board) = &report.leaderboard {
        md.push_str("\n## Tournament leaderboard\n\n");
        md.push_str("| rank | model | mean logit | 95% CI |\n");
        md.push_str("| ---: | --- | ---: | --- |\n");
        for row in board {
            let _ = writeln!(
                md,
                "| {} | {} | {:.4} | [{:.4}, {:.4}] |",
                row.rank,
                row.model,
                row.mean,
                row.mean + row.ci_low_offset,
                row.mean + row.ci_high_offset
            );
        }
    }

    if let Some(surrogate) = &report.surrogate {
        md.push_str("\n## Surrogate\n\n");
        let _ = writeln!(
            md,
            "- Kendall tau vs tournament means: {:.4}",
            surrogate.tau_vs_bt
        );
        match surrogate.holdout_r2 {
            Some(r2) => {
                let _ = writeln!(md, "- Holdout R^2: {r2:.4}");
            }
            None => md.push_str("- Holdout R^2: n/a\n"),
        }
        if !surrogate.holdout_models.is_empty() {
            let _ = writeln!(
                md,
                "- Holdout models: {}",
                surrogate.holdout_models.join(", ")
            );
        }
        match &surrogate.per_tournament_r2 {
            Some(per) => {
                let _ = writeln!(
                    md,
                    "- Per-tournament holdout R^2: mean {:.4}, 95% CI [{:.4}, {:.4}] \
                     over {} fit(s) ({} skipped)",
                    per.mean, per.ci_low, per.ci_high, per.n_fits, per.n_skipped
                );
            }
            None => md.push_str("- Per-tournament holdout R^2: not computed\n"),
        }
        for warning in &surrogate.warnings {
            let _ = writeln!(md, "- Warning: {warning}");
        }

        md.push_str("\n### Feature importance\n\n");
        md.push_str("| feature | weight |\n");
        md.push_str("| --- | ---: |\n");
        for row in &surrogate.importance {
            let _ = writeln!(md, "| {} | {:.4} |", row.feature, row.weight);
        }
    }

    if let Some(pairs) = &report.rank_pairs {
        md.push_str("\n## Rank agreement\n\n");
        md.push_str("| model | tournament rank | surrogate rank |\n");
        md.push_str("| --- | ---: | ---: |\n");
        for pair in pairs {
            let surrogate_rank = pair
                .surrogate_rank
                .map(|r| r.to_string())
                .unwrap_or_else(|| "-".to_string());
            let _ = writeln!(md, "| {} | {} | {} |", pair.model, pair.bt_rank, surrogate_rank);
        }
    }

    if let Some(rows) = &report.sampling {
        md.push_str("\n## Sampling ablation\n\n");
        md.push_str("| queries | match fraction | mean tau | sd | repeats | failed |\n");
        md.push_str("| ---: | ---: | ---: | ---: | ---: | ---: |\n");
        for row in rows {
            let _ = writeln!(
                md,
                "| {} | {:.2} | {:.4} | {:.4} | {} | {} |",
                row.n_queries,
                row.match_fraction,
                row.mean_tau,
                row.sd_tau,
                row.n_repeats,
                row.n_failed
            );
        }
    }

    if let Some(rows) = &report.feature_subsets {
        md.push_str("\n## Feature-subset ablation\n\n");
        md.push_str("| subset | features | tau vs tournament | holdout R^2 |\n");
        md.push_str("| --- | ---: | ---: | ---: |\n");
        for row in rows {
            let r2 = row
                .holdout_r2
                .map(|r| format!("{r:.4}"))
                .unwrap_or_else(|| "n/a".to_string());
            let _ = writeln!(
                md,
                "| {} | {} | {:.4} | {} |",
                row.subset, row.n_features, row.tau_vs_bt, r2
            );
        }
    }

    md.push_str("\n## Input files\n\n");
    md.push_str("| file | sha256 |\n");
    md.push_str("| --- | --- |\n");
    for input in &report.inputs {
        let _ = writeln!(md, "| {} | {} |", input.file, input.sha256);
    }

    if !report.runs.is_empty() {
        md.push_str("\n## Runs\n\n");
        md.push_str("| command | seed | rng streams |\n");
        md.push_str("| --- | ---: | --- |\n");
        for run in &report.runs {
            let command = run
                .get("command")
                .and_then(|v| v.as_str())
                .unwrap_or("?");
            let seed = run
                .get("seed")
                .and_then(|v| v.as_u64())
                .map(|s| s.to_string())
                .unwrap_or_else(|| "?".to_string());
            let streams = run
                .get("rng_streams")
                .and_then(|v| v.as_array())
                .map(|streams| {
                    streams
                        .iter()
                        .filter_map(|s| {
                            let label = s.get("label")?.as_str()?;
                            let count = s.get("streams")?.as_u64()?;
                            Some(format!("{label} x{count}"))
                        })
                        .collect::<Vec<_>>()
                        .join("; ")
                })
                .unwrap_or_default();
            let streams = if streams.is_empty() {
                "none".to_string()
            } else {
                streams
            };
            let _ = writeln!(md, "| {command} | {seed} | {streams} |");
        }
    }

    md
}
