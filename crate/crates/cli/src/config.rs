//! The run configuration: a single self-describing JSON document.
//!
//! Every subcommand reads the same config shape and takes the parts it
//! needs; `--seed` and `--out` on the command line override the config's
//! values. Unknown fields are rejected so a typo cannot silently fall back
//! to a default.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ragrank_arena::FitOptions;
use ragrank_core::QueryRecord;
use ragrank_surrogate::ForestHyper;
use ragrank_textmetrics::{FeatureName, FeatureSubset};
use serde::{Deserialize, Serialize};

/// Input file locations. All optional; each subcommand checks that the
/// files it actually needs exist before doing any work.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    /// Benchmark queries with labelled passages (JSONL).
    pub queries: Option<PathBuf>,
    /// Raw model outputs, one per (model, query) (JSONL).
    pub responses: Option<PathBuf>,
    /// Reference answers for the overlap metrics (JSONL).
    pub gold_answers: Option<PathBuf>,
    /// Externally computed feature scores (JSONL).
    pub external_scores: Option<PathBuf>,
    /// Pairwise judgments; when unset, stages look for `judgments.jsonl`
    /// in the output directory (where `judge` writes it).
    pub judgments: Option<PathBuf>,
}

/// Tournament bootstrap knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TournamentKnobs {
    /// Number of bootstrap tournaments.
    pub n_tournaments: usize,
    /// Queries drawn (with replacement) per tournament; defaults to the
    /// number of distinct queries in the judgment pool.
    pub n_queries: Option<usize>,
    /// Fraction of each tournament's judgments retained.
    pub match_fraction: f64,
    /// Strength-fit options (regularization, convergence).
    pub fit: FitOptions,
}

impl Default for TournamentKnobs {
    fn default() -> Self {
        Self {
            n_tournaments: 200,
            n_queries: None,
            match_fraction: 1.0,
            fit: FitOptions::default(),
        }
    }
}

/// Where and how to reach the judge model.
///
/// The credential is named here but *sourced from the environment* at call
/// time; it is never written to any file, log line, or error message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EndpointConfig {
    /// Full URL of a chat-completion endpoint.
    pub url: String,
    /// Model name sent in the request body.
    pub model: String,
    /// Name of the environment variable holding the bearer credential;
    /// `null` sends no authorization header.
    pub credential_env: Option<String>,
    /// Sampling temperature sent with every request.
    pub temperature: f64,
    /// Maximum concurrent requests.
    pub parallelism: usize,
    /// Retries per request after the first attempt.
    pub max_retries: u32,
    /// Per-request timeout in seconds.
    pub timeout_secs: u64,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        Self {
            url: String::new(),
            model: String::new(),
            credential_env: None,
            temperature: 0.1,
            parallelism: 4,
            max_retries: 2,
            timeout_secs: 30,
        }
    }
}

impl EndpointConfig {
    /// Rejects configurations that cannot produce a valid request.
    pub fn validate(&self) -> Result<()> {
        if self.url.is_empty() {
            bail!("endpoint.url must be set");
        }
        if self.model.is_empty() {
            bail!("endpoint.model must be set");
        }
        if !(self.temperature >= 0.0) {
            bail!("endpoint.temperature must be >= 0, got {}", self.temperature);
        }
        if self.parallelism == 0 {
            bail!("endpoint.parallelism must be at least 1");
        }
        Ok(())
    }
}

/// A feature selection as it appears in config and feature files: either a
/// preset name (`"all11"`, `"no_llm9"`, `"no_lowcorr7"`, `"only_llm2"`) or
/// an explicit list of feature names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubsetSpec {
    Preset(String),
    List(Vec<String>),
}

impl Default for SubsetSpec {
    fn default() -> Self {
        SubsetSpec::Preset("all11".to_string())
    }
}

impl SubsetSpec {
    /// Resolves the spec into a typed subset, rejecting unknown preset and
    /// feature names.
    pub fn resolve(&self) -> Result<FeatureSubset> {
        match self {
            SubsetSpec::Preset(name) => FeatureSubset::parse_preset(name).ok_or_else(|| {
                anyhow::anyhow!(
                    "unknown feature subset {name:?}; expected one of \
                     all11, no_llm9, no_lowcorr7, only_llm2, or an explicit list"
                )
            }),
            SubsetSpec::List(names) => {
                let features = names
                    .iter()
                    .map(|n| {
                        n.parse::<FeatureName>()
                            .with_context(|| format!("in custom feature subset: {n:?}"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if features.is_empty() {
                    bail!("custom feature subset must name at least one feature");
                }
                Ok(FeatureSubset::Custom(features))
            }
        }
    }
}

/// The full run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Input file locations.
    pub paths: Paths,
    /// Judge endpoint; required by `judge` only.
    pub endpoint: Option<EndpointConfig>,
    /// Bootstrap tournament knobs for `fit-bt`.
    pub tournament: TournamentKnobs,
    /// Forest hyperparameters for `surrogate`.
    pub forest: ForestHyper,
    /// Features the surrogate and the feature stage operate on.
    pub subset: SubsetSpec,
    /// Models held out of surrogate training.
    pub holdout: Vec<String>,
    /// Language code this run is restricted to. Required when the query
    /// file mixes languages: per-language runs are independent invocations.
    pub language: Option<String>,
    /// Judge prompt template file; the built-in template when unset.
    pub template: Option<PathBuf>,
    /// Whether `surrogate` refits against every bootstrap tournament to
    /// report the spread of holdout accuracy.
    #[serde(default = "default_true")]
    pub per_tournament_r2: bool,
    /// Default seed; `--seed` overrides.
    pub seed: u64,
    /// Default output directory; `--out` overrides.
    pub out: Option<PathBuf>,
}

fn default_true() -> bool {
    true
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            paths: Paths::default(),
            endpoint: None,
            tournament: TournamentKnobs::default(),
            forest: ForestHyper::default(),
            subset: SubsetSpec::default(),
            holdout: Vec::new(),
            language: None,
            template: None,
            per_tournament_r2: true,
            seed: 0,
            out: None,
        }
    }
}

impl RunConfig {
    /// Reads and parses a config file.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Restricts a query set to one language.
///
/// With an explicit `language`, keeps matching queries and errors when none
/// match. Without one, a single-language file passes through unchanged and
/// a mixed file is an error naming every language present — per-language
/// runs are independent invocations, so the caller must pick one.
pub fn filter_language(
    queries: Vec<QueryRecord>,
    language: Option<&str>,
) -> Result<Vec<QueryRecord>> {
    let present: BTreeSet<String> = queries.iter().map(|q| q.language.clone()).collect();
    match language {
        Some(want) => {
            let kept: Vec<QueryRecord> =
                queries.into_iter().filter(|q| q.language == want).collect();
            if kept.is_empty() {
                bail!(
                    "no queries in language {want:?}; languages present: {}",
                    join(&present)
                );
            }
            Ok(kept)
        }
        None => {
            if present.len() > 1 {
                bail!(
                    "query file mixes languages ({}); set \"language\" in the config \
                     (or run once per language)",
                    join(&present)
                );
            }
            Ok(queries)
        }
    }
}

fn join(set: &BTreeSet<String>) -> String {
    set.iter().cloned().collect::<Vec<_>>().join(", ")
}
