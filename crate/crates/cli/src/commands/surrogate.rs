//! `ragrank surrogate`: train the feature->strength regression forest
//! against the tournament fit and emit its report, leaderboard, and the
//! serialized forest.

use std::collections::BTreeSet;

use anyhow::{bail, Result};
use ragrank_arena::BtFit;
use ragrank_core::{ModelId, RngSeed};
use ragrank_surrogate::{surrogate_pipeline, HoldoutProtocol, PipelineConfig};

use crate::commands::{Ctx, BT_FIT_JSON, FEATURES_JSON, FOREST_JSON, SURROGATE_REPORT_JSON};
use crate::io::{read_json, write_json_pretty, write_text, FeatureFile};
use crate::meta::RunMeta;

pub fn run(ctx: &Ctx) -> Result<()> {
    let config = &ctx.config;
    let features_path = ctx.existing_artifact(FEATURES_JSON, "features")?;
    let fit_path = ctx.existing_artifact(BT_FIT_JSON, "fit-bt")?;
    let file: FeatureFile = read_json(&features_path)?;
    let fit: BtFit = read_json(&fit_path)?;

    let subset = config.subset.resolve()?;
    let available: BTreeSet<&str> = file.feature_names.iter().map(String::as_str).collect();
    let absent: Vec<&str> = subset
        .members()
        .iter()
        .map(|f| f.as_str())
        .filter(|name| !available.contains(name))
        .collect();
    if !absent.is_empty() {
        bail!(
            "feature file {} lacks {}; rerun `ragrank features` with a subset \
             covering them",
            features_path.display(),
            absent.join(", ")
        );
    }

    let holdout = if config.holdout.is_empty() {
        HoldoutProtocol::none()
    } else {
        let models = config
            .holdout
            .iter()
            .map(|name| Ok(ModelId::new(name.as_str())?))
            .collect::<Result<Vec<ModelId>>>()?;
        HoldoutProtocol::of(models)
    };

    let pipeline_config = PipelineConfig {
        subset,
        holdout,
        hyper: config.forest.clone(),
        seed: RngSeed(ctx.seed),
        per_tournament_r2: config.per_tournament_r2,
    };
    let report = surrogate_pipeline(&file.vectors, &fit, &pipeline_config)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }

    write_json_pretty(&ctx.artifact(SURROGATE_REPORT_JSON), &report)?;
    let mut forest_json = report.forest.to_json();
    forest_json.push('\n');
    write_text(&ctx.artifact(FOREST_JSON), &forest_json)?;

    let mut meta = RunMeta::new("surrogate", ctx.seed)
        .stream("tree-{index}", config.forest.n_trees);
    if let Some(per_tournament) = &report.per_tournament_r2 {
        meta = meta.stream(
            "tournament-fit-{index}",
            per_tournament.values.len() + per_tournament.n_skipped,
        );
    }
    meta.input_named(FEATURES_JSON, &features_path)?
        .input_named(BT_FIT_JSON, &fit_path)?
        .write(&ctx.out)?;

    println!(
        "surrogate: tau vs tournament means {:.4}, holdout R^2 {} -> {}",
        report.tau_vs_bt,
        report
            .holdout_r2
            .map(|r2| format!("{r2:.4}"))
            .unwrap_or_else(|| "n/a".to_string()),
        ctx.out.display()
    );
    Ok(())
}
