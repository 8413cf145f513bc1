//! `ragrank ablate-features`: retrain the surrogate under each feature
//! subset and compare how well the cheaper subsets track the tournament
//! leaderboard.

use std::collections::BTreeSet;

use anyhow::{bail, Result};
use clap::Args;
use ragrank_arena::BtFit;
use ragrank_core::{ModelId, RngSeed};
use ragrank_surrogate::{surrogate_pipeline, HoldoutProtocol, PipelineConfig};
use ragrank_textmetrics::FeatureSubset;

use crate::commands::{Ctx, ABLATE_FEATURES_CSV, BT_FIT_JSON, FEATURES_JSON};
use crate::io::{csv_float, read_json, write_csv, FeatureFile};
use crate::meta::RunMeta;

#[derive(Args, Debug, Clone)]
pub struct FeatureAblationArgs {
    /// Comma-separated subset preset names to compare.
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = vec![
            "all11".to_string(),
            "no_llm9".to_string(),
            "no_lowcorr7".to_string(),
            "only_llm2".to_string(),
        ]
    )]
    pub subsets: Vec<String>,
}

pub fn run(ctx: &Ctx, args: &FeatureAblationArgs) -> Result<()> {
    if args.subsets.is_empty() {
        bail!("--subsets must name at least one preset");
    }
    let config = &ctx.config;
    let features_path = ctx.existing_artifact(FEATURES_JSON, "features")?;
    let fit_path = ctx.existing_artifact(BT_FIT_JSON, "fit-bt")?;
    let file: FeatureFile = read_json(&features_path)?;
    let fit: BtFit = read_json(&fit_path)?;
    let available: BTreeSet<&str> = file.feature_names.iter().map(String::as_str).collect();

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

    let mut rows: Vec<Vec<String>> = Vec::new();
    for name in &args.subsets {
        let subset = FeatureSubset::parse_preset(name)
            .ok_or_else(|| anyhow::anyhow!("unknown subset preset {name:?}"))?;
        let members = subset.members();
        let absent: Vec<&str> = members
            .iter()
            .map(|f| f.as_str())
            .filter(|feature| !available.contains(feature))
            .collect();
        if !absent.is_empty() {
            bail!(
                "feature file {} lacks {} (needed by subset {name}); rerun \
                 `ragrank features` with a wider subset",
                features_path.display(),
                absent.join(", ")
            );
        }
        let pipeline_config = PipelineConfig {
            subset,
            holdout: holdout.clone(),
            hyper: config.forest.clone(),
            seed: RngSeed(ctx.seed),
            per_tournament_r2: false,
        };
        let report = surrogate_pipeline(&file.vectors, &fit, &pipeline_config)?;
        rows.push(vec![
            name.clone(),
            members.len().to_string(),
            csv_float(report.tau_vs_bt),
            report.holdout_r2.map(csv_float).unwrap_or_default(),
        ]);
    }

    write_csv(
        &ctx.artifact(ABLATE_FEATURES_CSV),
        &["subset", "n_features", "tau_vs_bt", "holdout_r2"],
        &rows,
    )?;

    RunMeta::new("ablate-features", ctx.seed)
        .stream("tree-{index}", config.forest.n_trees * args.subsets.len())
        .input_named(FEATURES_JSON, &features_path)?
        .input_named(BT_FIT_JSON, &fit_path)?
        .write(&ctx.out)?;

    println!(
        "ablate-features: {} subset(s) -> {}",
        args.subsets.len(),
        ctx.out.display()
    );
    Ok(())
}
