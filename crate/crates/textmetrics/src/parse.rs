//! Splitting raw model output into its marked-up parts.
//!
//! Generation prompts ask models to answer in the shape
//! `##Reason: ... ##Answer: ...` and to cite passages inline as `[id]` or
//! `[id#segment]`. Real outputs stray from that shape in every possible
//! way, so parsing is tolerant: markers are matched case-insensitively and
//! with loose whitespace, and missing markers degrade gracefully instead of
//! failing.

use std::sync::LazyLock;

use regex::Regex;

static REASON_MARKER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)##\s*reason\s*:").unwrap());
static ANSWER_MARKER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)##\s*answer\s*:").unwrap());
static CITATION: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\[(\d+(?:#\d+)?)\]").unwrap());

/// Splits raw output into `(reason, answer)`.
///
/// The split happens at the first `##Reason:` marker and the first
/// `##Answer:` marker after it. With no answer marker the remainder is all
/// reason; with neither marker the whole text is taken as the answer, so a
/// model that skipped the scaffolding entirely is still scored on what it
/// wrote.
pub fn parse_rag_output(raw: &str) -> (Option<String>, Option<String>) {
    let reason_at = REASON_MARKER.find(raw);
    let answer_at = match &reason_at {
        Some(m) => ANSWER_MARKER.find_at(raw, m.end()),
        None => ANSWER_MARKER.find(raw),
    };

    match (reason_at, answer_at) {
        (Some(r), Some(a)) => {
            let reason = raw[r.end()..a.start()].trim();
            let answer = raw[a.end()..].trim();
            (Some(reason.to_string()), Some(answer.to_string()))
        }
        (Some(r), None) => (Some(raw[r.end()..].trim().to_string()), None),
        (None, Some(a)) => (None, Some(raw[a.end()..].trim().to_string())),
        (None, None) => (None, Some(raw.trim().to_string())),
    }
}

/// Extracts citation ids like `[36897421#2]` or `[4]` in first-occurrence
/// order, deduplicated.
pub fn parse_citations(answer: &str) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    CITATION
        .captures_iter(answer)
        .map(|c| c[1].to_string())
        .filter(|id| seen.insert(id.clone()))
        .collect()
}
