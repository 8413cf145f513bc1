//! The feature vocabulary.
//!
//! Exactly eleven features describe one model's behaviour on a dataset.
//! Their enumeration order here is the canonical column order everywhere:
//! training matrices, serialized vectors, and CSV exports all follow it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use ragrank_core::ModelId;
use serde::{Deserialize, Serialize};

use crate::error::MetricsError;

/// One of the eleven per-query quality signals.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum FeatureName {
    /// Detector probability that the answer is in the query's target language.
    LangTarget,
    /// Detector probability that the answer is in English.
    LangEnglish,
    /// Recall of relevant passages among the first ten citations.
    CitationRecall10,
    /// Mean average precision of the first ten citations.
    CitationMap10,
    /// Externally computed NLI probability that citations entail the answer.
    SupportEntailment,
    /// Externally computed NLI probability of neutral support.
    SupportNeutral,
    /// Externally computed reranker score of the answer against the query.
    RerankerScore,
    /// ROUGE-L F1 of the answer against the gold answer.
    AnswerRougeL,
    /// Smoothed sentence-level BLEU of the answer against the gold answer.
    AnswerBleu,
    /// Rubric grading (1-5) of answer/gold overlap by an external LLM.
    LlmAnswerOverlap,
    /// Rubric grading (1-5) of answer fluency by an external LLM.
    LlmFluency,
}

impl FeatureName {
    /// Every feature, in canonical column order.
    pub const ALL: [FeatureName; 11] = [
        FeatureName::LangTarget,
        FeatureName::LangEnglish,
        FeatureName::CitationRecall10,
        FeatureName::CitationMap10,
        FeatureName::SupportEntailment,
        FeatureName::SupportNeutral,
        FeatureName::RerankerScore,
        FeatureName::AnswerRougeL,
        FeatureName::AnswerBleu,
        FeatureName::LlmAnswerOverlap,
        FeatureName::LlmFluency,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureName::LangTarget => "lang_target",
            FeatureName::LangEnglish => "lang_english",
            FeatureName::CitationRecall10 => "citation_recall10",
            FeatureName::CitationMap10 => "citation_map10",
            FeatureName::SupportEntailment => "support_entailment",
            FeatureName::SupportNeutral => "support_neutral",
            FeatureName::RerankerScore => "reranker_score",
            FeatureName::AnswerRougeL => "answer_rouge_l",
            FeatureName::AnswerBleu => "answer_bleu",
            FeatureName::LlmAnswerOverlap => "llm_answer_overlap",
            FeatureName::LlmFluency => "llm_fluency",
        }
    }

    /// Inclusive bounds of valid per-query values; `None` means unbounded
    /// above (reranker scores have no fixed ceiling).
    pub fn bounds(self) -> (f64, Option<f64>) {
        match self {
            FeatureName::LlmAnswerOverlap | FeatureName::LlmFluency => (1.0, Some(5.0)),
            FeatureName::RerankerScore => (0.0, None),
            _ => (0.0, Some(1.0)),
        }
    }

    /// Likert-style features take whole-number scores at the record level.
    pub fn integer_valued(self) -> bool {
        matches!(
            self,
            FeatureName::LlmAnswerOverlap | FeatureName::LlmFluency
        )
    }

    /// Features that arrive from outside the engine rather than being
    /// computed from the responses themselves.
    pub fn externally_sourced(self) -> bool {
        matches!(
            self,
            FeatureName::SupportEntailment
                | FeatureName::SupportNeutral
                | FeatureName::RerankerScore
                | FeatureName::LlmAnswerOverlap
                | FeatureName::LlmFluency
        )
    }
}

impl fmt::Display for FeatureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureName {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FeatureName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| MetricsError::UnknownFeature(s.to_string()))
    }
}

/// A named selection of features used for training and ablations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSubset {
    /// Every feature.
    All11,
    /// Drops the two LLM rubric gradings.
    NoLlm9,
    /// Additionally drops the language and NLI-support signals, which carry
    /// the least ranking information; keeps the seven strongest features.
    NoLowcorr7,
    /// Only the two LLM rubric gradings.
    OnlyLlm2,
    /// An explicit list, in canonical column order after deduplication.
    Custom(Vec<FeatureName>),
}

impl FeatureSubset {
    /// The selected features, in canonical column order.
    pub fn members(&self) -> Vec<FeatureName> {
        let keep: fn(FeatureName) -> bool = match self {
            FeatureSubset::All11 => |_| true,
            FeatureSubset::NoLlm9 => |f| {
                !matches!(f, FeatureName::LlmAnswerOverlap | FeatureName::LlmFluency)
            },
            FeatureSubset::NoLowcorr7 => |f| {
                !matches!(
                    f,
                    FeatureName::LangTarget
                        | FeatureName::LangEnglish
                        | FeatureName::SupportEntailment
                        | FeatureName::SupportNeutral
                )
            },
            FeatureSubset::OnlyLlm2 => |f| {
                matches!(f, FeatureName::LlmAnswerOverlap | FeatureName::LlmFluency)
            },
            FeatureSubset::Custom(list) => {
                return FeatureName::ALL
                    .into_iter()
                    .filter(|f| list.contains(f))
                    .collect();
            }
        };
        FeatureName::ALL.into_iter().filter(|&f| keep(f)).collect()
    }

    /// Parses one of the preset names; explicit lists use [`FeatureSubset::Custom`].
    pub fn parse_preset(name: &str) -> Option<FeatureSubset> {
        match name {
            "all11" => Some(FeatureSubset::All11),
            "no_llm9" => Some(FeatureSubset::NoLlm9),
            "no_lowcorr7" => Some(FeatureSubset::NoLowcorr7),
            "only_llm2" => Some(FeatureSubset::OnlyLlm2),
            _ => None,
        }
    }
}

/// One observed value of one feature for one (model, query) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub model_id: ModelId,
    pub query_id: String,
    pub feature: FeatureName,
    pub value: f64,
}

impl FeatureRecord {
    /// Builds a record, rejecting values outside the feature's bounds and
    /// fractional scores for Likert-style features.
    pub fn new(
        model_id: ModelId,
        query_id: impl Into<String>,
        feature: FeatureName,
        value: f64,
    ) -> Result<FeatureRecord, MetricsError> {
        let (lo, hi) = feature.bounds();
        let in_range = value.is_finite() && value >= lo && hi.is_none_or(|h| value <= h);
        if !in_range {
            return Err(MetricsError::ValueOutOfRange { feature, value });
        }
        if feature.integer_valued() && value.fract() != 0.0 {
            return Err(MetricsError::NonIntegerScore { feature, value });
        }
        Ok(FeatureRecord {
            model_id,
            query_id: query_id.into(),
            feature,
            value,
        })
    }
}

/// Per-model feature means over the queries of one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub model_id: ModelId,
    /// Mean value per feature; holds exactly the selected features.
    pub values: BTreeMap<FeatureName, f64>,
    /// Number of distinct queries the means are taken over.
    pub n_queries: usize,
}

impl FeatureVector {
    /// The vector restricted to `features`, as a dense row in the given
    /// order. Returns `None` if any requested feature is absent.
    pub fn row(&self, features: &[FeatureName]) -> Option<Vec<f64>> {
        features
            .iter()
            .map(|f| self.values.get(f).copied())
            .collect()
    }
}
