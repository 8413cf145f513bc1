use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised when constructing core domain values.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("model id must not be empty")]
    EmptyModelId,
    #[error("judgment pairs a model with itself: {0}")]
    SelfPairing(String),
    #[error("query {0} has no passages")]
    NoPassages(String),
    #[error("query {query_id} repeats passage id {passage_id}")]
    DuplicatePassageId { query_id: String, passage_id: String },
}

/// Identifier of one system under evaluation.
///
/// Always non-empty; ordering is lexicographic so that every collection
/// keyed by model has a single canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ModelId(String);

impl ModelId {
    pub fn new(name: impl Into<String>) -> Result<Self, CoreError> {
        let name = name.into();
        if name.is_empty() {
            return Err(CoreError::EmptyModelId);
        }
        Ok(ModelId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for ModelId {
    type Error = CoreError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        ModelId::new(value)
    }
}

impl From<ModelId> for String {
    fn from(value: ModelId) -> Self {
        value.0
    }
}

/// One retrieved passage shown to a system, with its relevance label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Passage {
    pub passage_id: String,
    pub text: String,
    pub relevant: bool,
}

/// A benchmark query together with the passages that were retrieved for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub query_id: String,
    /// ISO-style language code the answer is expected in (e.g. "de", "zh").
    pub language: String,
    pub text: String,
    pub passages: Vec<Passage>,
}

impl QueryRecord {
    /// Checks the per-record shape: at least one passage, no repeated
    /// passage ids. Dataset-level readiness is [`crate::validate_dataset`]'s
    /// job.
    pub fn check_shape(&self) -> Result<(), CoreError> {
        if self.passages.is_empty() {
            return Err(CoreError::NoPassages(self.query_id.clone()));
        }
        let mut seen = std::collections::HashSet::new();
        for p in &self.passages {
            if !seen.insert(p.passage_id.as_str()) {
                return Err(CoreError::DuplicatePassageId {
                    query_id: self.query_id.clone(),
                    passage_id: p.passage_id.clone(),
                });
            }
        }
        Ok(())
    }

    /// Ids of the passages labelled relevant, in retrieval order.
    pub fn relevant_ids(&self) -> impl Iterator<Item = &str> {
        self.passages
            .iter()
            .filter(|p| p.relevant)
            .map(|p| p.passage_id.as_str())
    }
}

/// One system's output for one query, split into its marked-up parts.
///
/// `reason` and `answer` are `None` only when the raw text carried no
/// corresponding marker; `cited_ids` preserves first-occurrence order and
/// keeps ids that do not resolve to a passage of the query, so citation
/// metrics can penalize them (see [`RagResponse::unknown_citations`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RagResponse {
    pub model_id: ModelId,
    pub query_id: String,
    pub raw_text: String,
    pub reason: Option<String>,
    pub answer: Option<String>,
    pub cited_ids: Vec<String>,
}

impl RagResponse {
    /// Cited ids that are not passage ids of `query`, in citation order.
    pub fn unknown_citations<'a>(&'a self, query: &QueryRecord) -> Vec<&'a str> {
        let known: std::collections::HashSet<&str> = query
            .passages
            .iter()
            .map(|p| p.passage_id.as_str())
            .collect();
        self.cited_ids
            .iter()
            .map(|c| c.as_str())
            .filter(|c| !known.contains(c))
            .collect()
    }
}

/// Outcome of one pairwise comparison, in canonical (unswapped) orientation.
///
/// Serializes to the wire names `"A"`, `"B"`, and `"TIE"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "A")]
    WinA,
    #[serde(rename = "B")]
    WinB,
    #[serde(rename = "TIE")]
    Tie,
}

impl Verdict {
    /// The verdict as seen from the opposite presentation order.
    /// Flipping twice always returns the original verdict.
    pub fn flipped(self) -> Verdict {
        match self {
            Verdict::WinA => Verdict::WinB,
            Verdict::WinB => Verdict::WinA,
            Verdict::Tie => Verdict::Tie,
        }
    }
}

/// One judged comparison between two distinct models on one query.
///
/// `verdict` always refers to `model_a`/`model_b` as stored here, not to
/// the order the judge saw; `swapped` records that the presentation was
/// reversed so audits can reconstruct the raw exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseJudgment {
    pub query_id: String,
    pub model_a: ModelId,
    pub model_b: ModelId,
    pub verdict: Verdict,
    pub swapped: bool,
}

impl PairwiseJudgment {
    pub fn new(
        query_id: impl Into<String>,
        model_a: ModelId,
        model_b: ModelId,
        verdict: Verdict,
        swapped: bool,
    ) -> Result<Self, CoreError> {
        if model_a == model_b {
            return Err(CoreError::SelfPairing(model_a.to_string()));
        }
        Ok(PairwiseJudgment {
            query_id: query_id.into(),
            model_a,
            model_b,
            verdict,
            swapped,
        })
    }
}
