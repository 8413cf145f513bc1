//! Dataset readiness checks.
//!
//! A dataset is ready for feature extraction and judging only when every
//! response points at a known query, every query has at least one relevant
//! passage, and every model answered every query. `validate_dataset`
//! enumerates the violations instead of failing fast, so a caller can print
//! one complete report.

use std::collections::{BTreeMap, BTreeSet};

use crate::types::{ModelId, QueryRecord, RagResponse};

/// Everything that stands between a dataset and a clean run.
///
/// All three lists are sorted, so two validations of the same data produce
/// the same report.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// Responses whose `query_id` does not occur in the query set, deduplicated.
    pub unknown_query_refs: Vec<(ModelId, String)>,
    /// Queries with no passage labelled relevant.
    pub queries_without_relevant: Vec<String>,
    /// (model, query) combinations with no response.
    pub missing_pairs: Vec<(ModelId, String)>,
}

impl ValidationReport {
    /// True when the dataset can flow through the whole pipeline.
    pub fn is_ready(&self) -> bool {
        self.unknown_query_refs.is_empty()
            && self.queries_without_relevant.is_empty()
            && self.missing_pairs.is_empty()
    }
}

/// Cross-checks responses against queries.
///
/// The model universe is taken from the responses themselves: a model that
/// never responded at all is out of scope, but a model that responded to
/// some queries must have responded to every query.
pub fn validate_dataset(queries: &[QueryRecord], responses: &[RagResponse]) -> ValidationReport {
    let known_queries: BTreeSet<&str> = queries.iter().map(|q| q.query_id.as_str()).collect();

    let mut unknown_query_refs: BTreeSet<(ModelId, String)> = BTreeSet::new();
    // model -> set of queries it answered
    let mut answered: BTreeMap<&ModelId, BTreeSet<&str>> = BTreeMap::new();
    for r in responses {
        if !known_queries.contains(r.query_id.as_str()) {
            unknown_query_refs.insert((r.model_id.clone(), r.query_id.clone()));
        }
        answered.entry(&r.model_id).or_default().insert(&r.query_id);
    }

    let queries_without_relevant: Vec<String> = queries
        .iter()
        .filter(|q| q.relevant_ids().next().is_none())
        .map(|q| q.query_id.clone())
        .collect();

    let mut missing_pairs = Vec::new();
    for (model, got) in &answered {
        for q in &known_queries {
            if !got.contains(q) {
                missing_pairs.push(((*model).clone(), (*q).to_string()));
            }
        }
    }
    missing_pairs.sort();

    ValidationReport {
        unknown_query_refs: unknown_query_refs.into_iter().collect(),
        queries_without_relevant,
        missing_pairs,
    }
}
