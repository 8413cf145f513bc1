//! Synthetic worlds with known model strengths.

use crate::SimError;
use rand::RngExt;
use rand_distr::{Distribution, Normal};
use ragrank_core::{derive_rng, ModelId, PairwiseJudgment, RngSeed, Verdict};
use ragrank_textmetrics::{FeatureName, FeatureVector};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Upper bound on queries, keeping generated query ids fixed-width.
const MAX_QUERIES: usize = 9_999;
/// Upper bound on models, keeping generated model ids fixed-width.
const MAX_MODELS: usize = 99;
/// Nominal upper bound used to scale features whose range is unbounded above.
const UNBOUNDED_FEATURE_NOMINAL_MAX: f64 = 2.0;

/// How one feature couples to the true strengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    /// Weight of the model's true logit in the feature's raw value. Zero
    /// makes the feature pure noise.
    pub signal_weight: f64,
    /// Standard deviation of the Gaussian noise added to the raw value.
    pub noise_sd: f64,
}

/// A fixed roster of models with known strengths and a recipe for generating
/// judgments and features from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticWorld {
    /// Mean-centered true strength logit per model; model `i` is named
    /// `model-{i:02}`.
    pub true_logits: Vec<f64>,
    /// Number of queries; query `i` is named `q{i:04}`.
    pub n_queries: usize,
    /// Probability that any single judgment is a tie, independent of the
    /// strength gap.
    pub p_tie: f64,
    /// Features to generate, keyed by name.
    pub features: BTreeMap<FeatureName, FeatureSpec>,
    /// Seed all generation randomness derives from.
    pub seed: RngSeed,
}

impl SyntheticWorld {
    /// Builds a world from explicit logits, mean-centering them first.
    pub fn new(
        true_logits: Vec<f64>,
        n_queries: usize,
        p_tie: f64,
        seed: RngSeed,
    ) -> Result<Self, SimError> {
        let n = true_logits.len();
        let mean = true_logits.iter().sum::<f64>() / n.max(1) as f64;
        let world = Self {
            true_logits: true_logits.iter().map(|l| l - mean).collect(),
            n_queries,
            p_tie,
            features: BTreeMap::new(),
            seed,
        };
        world.validate()?;
        Ok(world)
    }

    /// Builds a world of `n_models` strengths drawn uniformly from
    /// `[-2, 2]` (then centered), using the stream `world-logits` of `seed`.
    pub fn random(
        n_models: usize,
        n_queries: usize,
        p_tie: f64,
        seed: RngSeed,
    ) -> Result<Self, SimError> {
        let mut rng = derive_rng(seed, "world-logits");
        let logits: Vec<f64> = (0..n_models).map(|_| rng.random_range(-2.0..2.0)).collect();
        Self::new(logits, n_queries, p_tie, seed)
    }

    /// Checks all invariants; call after deserializing or mutating fields.
    pub fn validate(&self) -> Result<(), SimError> {
        let n = self.true_logits.len();
        if !(2..=MAX_MODELS).contains(&n) {
            return Err(SimError::InvalidWorld {
                field: "true_logits",
                value: n.to_string(),
                reason: "roster must have between 2 and 99 models",
            });
        }
        if self.true_logits.iter().any(|l| !l.is_finite()) {
            return Err(SimError::InvalidWorld {
                field: "true_logits",
                value: "non-finite".to_string(),
                reason: "logits must be finite",
            });
        }
        if !(1..=MAX_QUERIES).contains(&self.n_queries) {
            return Err(SimError::InvalidWorld {
                field: "n_queries",
                value: self.n_queries.to_string(),
                reason: "must be between 1 and 9999",
            });
        }
        if !(0.0..1.0).contains(&self.p_tie) {
            return Err(SimError::InvalidWorld {
                field: "p_tie",
                value: self.p_tie.to_string(),
                reason: "must lie in [0, 1)",
            });
        }
        for (name, spec) in &self.features {
            if !spec.signal_weight.is_finite() || !spec.noise_sd.is_finite() || spec.noise_sd < 0.0
            {
                return Err(SimError::InvalidWorld {
                    field: name.as_str(),
                    value: format!("({}, {})", spec.signal_weight, spec.noise_sd),
                    reason: "signal weight must be finite, noise sd finite and nonnegative",
                });
            }
        }
        Ok(())
    }

    /// Number of models in the roster.
    pub fn n_models(&self) -> usize {
        self.true_logits.len()
    }

    /// Roster ids: `model-00`, `model-01`, ...
    pub fn model_ids(&self) -> Vec<ModelId> {
        (0..self.n_models())
            .map(|i| ModelId::new(format!("model-{i:02}")).expect("generated ids are non-empty"))
            .collect()
    }

    /// Query ids: `q0000`, `q0001`, ...
    pub fn query_ids(&self) -> Vec<String> {
        (0..self.n_queries).map(|i| format!("q{i:04}")).collect()
    }

    /// True logits keyed by model id, handy for rank comparisons.
    pub fn logits_by_model(&self) -> BTreeMap<ModelId, f64> {
        self.model_ids()
            .into_iter()
            .zip(self.true_logits.iter().copied())
            .collect()
    }
}

/// Gives every feature the same coupling, a convenient uniform design.
pub fn uniform_feature_specs(
    signal_weight: f64,
    noise_sd: f64,
) -> BTreeMap<FeatureName, FeatureSpec> {
    FeatureName::ALL
        .iter()
        .map(|&name| {
            (
                name,
                FeatureSpec {
                    signal_weight,
                    noise_sd,
                },
            )
        })
        .collect()
}

/// Logistic function.
fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Generates one judgment per (query, model pair) cell.
///
/// For each query (in id order) and each pair `i < j` (in index order), one
/// uniform draw from the `judgments` stream of the world seed decides the
/// outcome: with probability `p_tie` a tie; otherwise model `i` wins with the
/// Bradley-Terry probability `sigmoid(logit_i - logit_j)`. Judgments are
/// emitted with `model_a = model_i`, `model_b = model_j`, `swapped = false`.
pub fn generate_judgments(world: &SyntheticWorld) -> Result<Vec<PairwiseJudgment>, SimError> {
    world.validate()?;
    let models = world.model_ids();
    let n = models.len();
    let mut rng = derive_rng(world.seed, "judgments");
    let mut judgments = Vec::with_capacity(world.n_queries * n * (n - 1) / 2);

    for query_id in world.query_ids() {
        for i in 0..n {
            for j in (i + 1)..n {
                let p_i_wins =
                    (1.0 - world.p_tie) * sigmoid(world.true_logits[i] - world.true_logits[j]);
                let u: f64 = rng.random();
                let verdict = if u < p_i_wins {
                    Verdict::WinA
                } else if u < p_i_wins + world.p_tie {
                    Verdict::Tie
                } else {
                    Verdict::WinB
                };
                judgments.push(
                    PairwiseJudgment::new(
                        query_id.clone(),
                        models[i].clone(),
                        models[j].clone(),
                        verdict,
                        false,
                    )
                    .expect("generated pairs are never self-pairings"),
                );
            }
        }
    }
    Ok(judgments)
}

/// Generates one aggregated feature vector per model.
///
/// For each model (in index order) and each configured feature (in name
/// order), the raw value is `signal_weight * true_logit + noise_sd * z` with
/// `z` standard normal from the `features` stream. The raw value is then
/// mapped affinely into the feature's own range — centered at the midpoint
/// and scaled so raw `±3` spans the full range — and clamped. Features
/// without an upper bound use a nominal maximum of 2.
pub fn generate_features(world: &SyntheticWorld) -> Result<Vec<FeatureVector>, SimError> {
    world.validate()?;
    let mut rng = derive_rng(world.seed, "features");
    let normal = Normal::new(0.0, 1.0).expect("unit normal is well-formed");
    let models = world.model_ids();

    let mut vectors = Vec::with_capacity(models.len());
    for (model_id, &logit) in models.into_iter().zip(&world.true_logits) {
        let mut values = BTreeMap::new();
        for (&name, spec) in &world.features {
            let raw = spec.signal_weight * logit + spec.noise_sd * normal.sample(&mut rng);
            let (lo, hi) = name.bounds();
            let hi = hi.unwrap_or(UNBOUNDED_FEATURE_NOMINAL_MAX);
            let mid = (lo + hi) / 2.0;
            let value = (mid + raw * (hi - lo) / 6.0).clamp(lo, hi);
            values.insert(name, value);
        }
        vectors.push(FeatureVector {
            model_id,
            values,
            n_queries: world.n_queries,
        });
    }
    Ok(vectors)
}
