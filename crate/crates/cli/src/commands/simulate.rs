//! `ragrank simulate`: generate a synthetic world — judge-free judgments
//! with known true strengths, plus optional feature vectors — so the rest
//! of the pipeline can be validated against a known answer.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use ragrank_core::RngSeed;
use ragrank_simkit::{generate_features, generate_judgments, uniform_feature_specs, SyntheticWorld};
use ragrank_textmetrics::FeatureName;

use crate::commands::{Ctx, JUDGMENTS_JSONL, TRUE_LOGITS_JSON, WORLD_JSON};
use crate::config::SubsetSpec;
use crate::io::{read_json, write_json_pretty, write_jsonl, FeatureFile, JudgmentRow};
use crate::meta::RunMeta;

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    /// World spec JSON to replay instead of generating one (its own seed
    /// applies).
    #[arg(long)]
    pub world: Option<PathBuf>,

    /// Roster size for a generated world.
    #[arg(long, default_value_t = 10)]
    pub n_models: usize,

    /// Queries per generated world.
    #[arg(long, default_value_t = 100)]
    pub n_queries: usize,

    /// Probability a comparison is judged a tie.
    #[arg(long, default_value_t = 0.1)]
    pub p_tie: f64,

    /// How strongly generated features track true strength.
    #[arg(long, default_value_t = 1.0)]
    pub signal: f64,

    /// Gaussian noise added to generated features.
    #[arg(long, default_value_t = 0.3)]
    pub noise: f64,
}

pub fn run(ctx: &Ctx, args: &SimulateArgs) -> Result<()> {
    let generated = args.world.is_none();
    let world: SyntheticWorld = match &args.world {
        Some(path) => {
            let world: SyntheticWorld = read_json(path)?;
            world.validate()?;
            world
        }
        None => {
            let mut world = SyntheticWorld::random(
                args.n_models,
                args.n_queries,
                args.p_tie,
                RngSeed(ctx.seed),
            )?;
            world.features = uniform_feature_specs(args.signal, args.noise);
            world
        }
    };

    write_json_pretty(&ctx.artifact(WORLD_JSON), &world)?;
    write_json_pretty(&ctx.artifact(TRUE_LOGITS_JSON), &world.logits_by_model())?;

    let judgments = generate_judgments(&world)?;
    let rows: Vec<JudgmentRow> = judgments.iter().map(JudgmentRow::from_judgment).collect();
    write_jsonl(&ctx.artifact(JUDGMENTS_JSONL), &rows)?;

    let mut wrote_features = false;
    if !world.features.is_empty() {
        let vectors = generate_features(&world)?;
        let names: Vec<String> = world
            .features
            .keys()
            .map(|f| f.as_str().to_string())
            .collect();
        let subset = if world.features.len() == FeatureName::ALL.len() {
            SubsetSpec::Preset("all11".to_string())
        } else {
            SubsetSpec::List(names.clone())
        };
        let file = FeatureFile {
            subset,
            feature_names: names,
            vectors,
            missing: Vec::new(),
        };
        write_json_pretty(&ctx.artifact(crate::commands::FEATURES_JSON), &file)?;
        wrote_features = true;
    }

    let mut meta = RunMeta::new("simulate", world.seed.0);
    if generated {
        meta = meta.stream("world-logits", 1);
    }
    meta = meta.stream("judgments", 1);
    if wrote_features {
        meta = meta.stream("features", 1);
    }
    if let Some(path) = &args.world {
        meta = meta.input(path)?;
    }
    meta.write(&ctx.out)?;

    println!(
        "simulate: {} models x {} queries, {} judgment(s){} -> {}",
        world.true_logits.len(),
        world.n_queries,
        rows.len(),
        if wrote_features { ", features" } else { "" },
        ctx.out.display()
    );
    Ok(())
}
