//! ROUGE-L: longest-common-subsequence F1 between candidate and reference.

use crate::tokenize::{tokenize, TokenizerMode};

/// Length of the longest common subsequence of two token slices, by the
/// standard two-row dynamic program.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for ai in a {
        for (j, bj) in b.iter().enumerate() {
            cur[j + 1] = if ai == bj {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// ROUGE-L F1 of `candidate` against `reference`.
///
/// Precision is LCS length over candidate length, recall is LCS length over
/// reference length, and the score is their harmonic mean. Either side
/// tokenizing to nothing scores 0.0.
pub fn rouge_l(candidate: &str, reference: &str, mode: TokenizerMode) -> f64 {
    let cand = tokenize(candidate, mode);
    let refr = tokenize(reference, mode);
    if cand.is_empty() || refr.is_empty() {
        return 0.0;
    }
    let lcs = lcs_len(&cand, &refr) as f64;
    if lcs == 0.0 {
        return 0.0;
    }
    let precision = lcs / cand.len() as f64;
    let recall = lcs / refr.len() as f64;
    2.0 * precision * recall / (precision + recall)
}
