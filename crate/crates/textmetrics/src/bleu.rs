//! Smoothed sentence-level BLEU.

use std::collections::HashMap;

use crate::tokenize::{tokenize, TokenizerMode};

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts: HashMap<&[String], usize> = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Sentence-level BLEU of `candidate` against a single `reference`.
///
/// Geometric mean of modified n-gram precisions for n = 1..=max_n, with
/// add-one smoothing on every order above 1 so that a missing higher-order
/// match cannot zero out the whole score, times the brevity penalty
/// `exp(1 - |ref| / |cand|)` for candidates shorter than the reference.
/// The score is 0.0 exactly when there is no unigram overlap (or either
/// side is empty).
pub fn bleu(candidate: &str, reference: &str, max_n: usize, mode: TokenizerMode) -> f64 {
    assert!(max_n >= 1, "bleu needs at least unigram precision");
    let cand = tokenize(candidate, mode);
    let refr = tokenize(reference, mode);
    if cand.is_empty() || refr.is_empty() {
        return 0.0;
    }

    let mut log_precision_sum = 0.0;
    for n in 1..=max_n {
        let cand_grams = ngram_counts(&cand, n);
        let ref_grams = ngram_counts(&refr, n);
        let total: usize = cand_grams.values().sum();
        let matched: usize = cand_grams
            .iter()
            .map(|(gram, &count)| count.min(ref_grams.get(gram).copied().unwrap_or(0)))
            .sum();
        let precision = if n == 1 {
            // Unsmoothed: no shared unigrams means no credit at all.
            if matched == 0 {
                return 0.0;
            }
            matched as f64 / total as f64
        } else {
            (matched + 1) as f64 / (total + 1) as f64
        };
        log_precision_sum += precision.ln();
    }

    let brevity = if cand.len() < refr.len() {
        (1.0 - refr.len() as f64 / cand.len() as f64).exp()
    } else {
        1.0
    };
    brevity * (log_precision_sum / max_n as f64).exp()
}
