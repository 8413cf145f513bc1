//! Citation quality: recall and mean average precision at a cutoff.

use std::collections::HashSet;

use ragrank_core::Passage;

use crate::error::MetricsError;

/// Recall@k and MAP@k of a citation list against relevance labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CitationScores {
    pub recall: f64,
    pub map: f64,
    /// True when the query has no relevant passage at all. Both scores are
    /// then 1.0 by convention — there was nothing to find — and the caller
    /// should surface the flag rather than silently counting a perfect hit.
    pub no_relevant: bool,
}

/// Scores the first `k` cited ids against the passages' relevance labels.
///
/// Recall@k is the fraction of relevant passages that appear among the
/// first `k` citations. MAP@k averages precision at each hit rank and
/// divides by `min(|relevant|, k)`, so relevant passages that were never
/// cited pull the score down. Cited ids that match no passage of the query
/// still occupy ranks, which penalizes fabricated citations.
pub fn citation_metrics(
    cited_ids: &[String],
    passages: &[Passage],
    k: usize,
) -> Result<CitationScores, MetricsError> {
    if k == 0 {
        return Err(MetricsError::ZeroCutoff);
    }

    let relevant: HashSet<&str> = passages
        .iter()
        .filter(|p| p.relevant)
        .map(|p| p.passage_id.as_str())
        .collect();
    if relevant.is_empty() {
        return Ok(CitationScores { recall: 1.0, map: 1.0, no_relevant: true });
    }

    let mut hits = 0usize;
    let mut precision_sum = 0.0;
    for (rank0, cited) in cited_ids.iter().take(k).enumerate() {
        if relevant.contains(cited.as_str()) {
            hits += 1;
            precision_sum += hits as f64 / (rank0 + 1) as f64;
        }
    }

    Ok(CitationScores {
        recall: hits as f64 / relevant.len() as f64,
        map: precision_sum / relevant.len().min(k) as f64,
        no_relevant: false,
    })
}
