//! Heuristic quality features for retrieval-augmented generation outputs.
//!
//! Turns raw model responses into a fixed vocabulary of per-query feature
//! records — citation precision/recall, reference-overlap scores, language
//! identification — merges externally computed scores (NLI support labels,
//! reranker scores, rubric gradings), and aggregates everything into one
//! feature vector per model.

mod aggregate;
mod bleu;
mod citation;
mod error;
mod features;
mod ingest;
mod language;
mod parse;
mod rouge;
mod tokenize;

pub use aggregate::{aggregate_features, Aggregation, MissingValue};
pub use bleu::bleu;
pub use citation::{citation_metrics, CitationScores};
pub use error::MetricsError;
pub use features::{FeatureName, FeatureRecord, FeatureSubset, FeatureVector};
pub use ingest::{ingest_external_scores, ExternalScoreRecord};
pub use language::{bundled_profiles, detect_language, LanguageProfile};
pub use parse::{parse_citations, parse_rag_output};
pub use rouge::{lcs_len, rouge_l};
pub use tokenize::{tokenize, TokenizerMode};
