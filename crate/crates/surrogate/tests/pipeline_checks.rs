//! End-to-end pipeline checks on synthetic worlds with known ground truth.

use ragrank_arena::{bootstrap_bt, TournamentConfig};
use ragrank_core::{ModelId, RngSeed};
use ragrank_simkit::{generate_features, generate_judgments, uniform_feature_specs, SyntheticWorld};
use ragrank_surrogate::{surrogate_pipeline, HoldoutProtocol, PipelineConfig};
use ragrank_textmetrics::FeatureSubset;

/// World, features, and bootstrap fit shared by the tests below.
fn fixtures(
    signal: f64,
    noise: f64,
    seed: u64,
) -> (
    SyntheticWorld,
    Vec<ragrank_textmetrics::FeatureVector>,
    ragrank_arena::BtFit,
) {
    let mut world = SyntheticWorld::new(
        vec![1.6, 1.1, 0.7, 0.3, -0.1, -0.5, -0.9, -2.2],
        60,
        0.1,
        RngSeed(seed),
    )
    .unwrap();
    world.features = uniform_feature_specs(signal, noise);
    let features = generate_features(&world).unwrap();
    let judgments = generate_judgments(&world).unwrap();
    let bt = bootstrap_bt(
        &judgments,
        &world.query_ids(),
        &TournamentConfig {
            n_tournaments: 40,
            n_queries: 60,
            seed: RngSeed(seed),
            ..TournamentConfig::default()
        },
    )
    .unwrap();
    (world, features, bt)
}

#[test]
fn informative_features_recover_the_ranking() {
    let (_, features, bt) = fixtures(1.0, 0.2, 21);
    let config = PipelineConfig {
        holdout: HoldoutProtocol::of([
            ModelId::new("model-02").unwrap(),
            ModelId::new("model-06").unwrap(),
        ]),
        seed: RngSeed(5),
        ..PipelineConfig::default()
    };
    let report = surrogate_pipeline(&features, &bt, &config).unwrap();

    assert!(
        report.tau_vs_bt > 0.6,
        "informative features should recover the ranking, tau = {}",
        report.tau_vs_bt
    );
    assert_eq!(report.holdout_models.len(), 2);
    assert_eq!(report.predictions.len(), 8);
    assert_eq!(report.predicted_board.entries.len(), 8);
    assert!(report.holdout_r2.is_some());

    let spread = report.per_tournament_r2.as_ref().expect("enabled by default");
    assert_eq!(spread.values.len() + spread.n_skipped, 40);
    assert!(spread.ci_low <= spread.mean && spread.mean <= spread.ci_high);

    // Importance is normalized over the 11 features.
    let total: f64 = report.forest.importance.iter().sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn pipeline_is_deterministic() {
    let (_, features, bt) = fixtures(1.0, 0.3, 33);
    let config = PipelineConfig {
        holdout: HoldoutProtocol::of([
            ModelId::new("model-01").unwrap(),
            ModelId::new("model-05").unwrap(),
        ]),
        seed: RngSeed(9),
        ..PipelineConfig::default()
    };
    let a = surrogate_pipeline(&features, &bt, &config).unwrap();
    let b = surrogate_pipeline(&features, &bt, &config).unwrap();
    assert_eq!(a, b);
}

#[test]
fn feature_subsets_restrict_the_forest() {
    let (_, features, bt) = fixtures(1.0, 0.2, 44);
    let config = PipelineConfig {
        subset: FeatureSubset::OnlyLlm2,
        holdout: HoldoutProtocol::none(),
        per_tournament_r2: false,
        seed: RngSeed(2),
        ..PipelineConfig::default()
    };
    let report = surrogate_pipeline(&features, &bt, &config).unwrap();
    assert_eq!(report.forest.feature_names.len(), 2);
    assert_eq!(report.forest.importance.len(), 2);
    // No holdout: the pipeline must say evaluation ran on training data.
    assert!(report
        .warnings
        .iter()
        .any(|w| w.contains("held out")));
    assert!(report.holdout_r2.is_none());
}

#[test]
fn pure_noise_features_fail_to_generalize() {
    let (_, features, bt) = fixtures(0.0, 1.0, 55);
    let config = PipelineConfig {
        holdout: HoldoutProtocol::of([
            ModelId::new("model-00").unwrap(),
            ModelId::new("model-07").unwrap(),
        ]),
        per_tournament_r2: false,
        seed: RngSeed(3),
        ..PipelineConfig::default()
    };
    let report = surrogate_pipeline(&features, &bt, &config).unwrap();
    // The strongest and weakest models are held out; noise features cannot
    // place them correctly, so holdout accuracy collapses (R² far below the
    // ~1 an informative surrogate reaches; typically negative).
    let r2 = report.holdout_r2.expect("two holdout models");
    assert!(r2 < 0.5, "noise features should not score well, r2 = {r2}");
}

#[test]
fn missing_holdout_model_fails_loudly() {
    let (_, features, bt) = fixtures(1.0, 0.2, 66);
    let config = PipelineConfig {
        holdout: HoldoutProtocol::of([ModelId::new("model-99").unwrap()]),
        ..PipelineConfig::default()
    };
    let err = surrogate_pipeline(&features, &bt, &config).unwrap_err();
    assert!(matches!(
        err,
        ragrank_surrogate::SurrogateError::HoldoutNotFound { .. }
    ));
}
