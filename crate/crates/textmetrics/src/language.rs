//! Character-trigram language identification.
//!
//! Each language is summarized by an L2-normalized bag of character
//! trigrams built from a small fixture corpus. Detection scores a text's
//! trigram vector against every profile by cosine similarity and turns the
//! similarities into probabilities with a softmax, so the result always
//! sums to one and the winning language is the nearest profile.

use std::collections::{BTreeMap, HashMap};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::MetricsError;

/// Detection needs at least this many non-whitespace characters; anything
/// shorter has too little trigram mass to score reliably.
pub const MIN_DETECTABLE_CHARS: usize = 20;

/// Sharpness of the similarity-to-probability softmax. Cosine gaps between
/// the right profile and the runner-up are typically a few tenths, so this
/// scale turns a clear match into a dominant probability without saturating
/// on noise.
const SOFTMAX_SHARPNESS: f64 = 12.0;

/// An L2-normalized trigram frequency profile of one language.
///
/// Weights live in a sorted map so similarity sums always accumulate in the
/// same order: detection must be bit-for-bit reproducible across processes,
/// and float addition is not associative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageProfile {
    pub language: String,
    /// Trigram -> weight; the weight vector has unit L2 norm.
    pub trigrams: BTreeMap<String, f64>,
}

impl LanguageProfile {
    /// Builds a profile from corpus text.
    pub fn from_text(language: impl Into<String>, corpus: &str) -> LanguageProfile {
        let counts = trigram_counts(corpus);
        let norm = (counts.values().map(|&c| (c * c) as f64).sum::<f64>()).sqrt();
        let trigrams = counts
            .into_iter()
            .map(|(g, c)| (g, c as f64 / norm.max(1.0)))
            .collect();
        LanguageProfile { language: language.into(), trigrams }
    }

    fn cosine(&self, other: &BTreeMap<String, f64>) -> f64 {
        // Both sides are unit vectors, so the dot product is the cosine.
        let (small, large) = if self.trigrams.len() <= other.len() {
            (&self.trigrams, other)
        } else {
            (other, &self.trigrams)
        };
        small
            .iter()
            .filter_map(|(g, w)| large.get(g).map(|v| w * v))
            .sum()
    }
}

/// Normalizes text the same way for profiles and probes: NFC, lowercase,
/// punctuation to spaces, whitespace runs collapsed, padded with one space
/// on each side so word boundaries contribute trigrams.
fn normalize_for_trigrams(text: &str) -> Vec<char> {
    let lowered: String = text.nfc().collect::<String>().to_lowercase();
    let mut out = vec![' '];
    for c in lowered.chars() {
        // The tokenizer's separator set doubles as the trigram-context
        // boundary: anything that splits words also splits trigrams.
        if crate::tokenize::is_separator(c) {
            if out.last() != Some(&' ') {
                out.push(' ');
            }
        } else {
            out.push(c);
        }
    }
    if out.last() != Some(&' ') {
        out.push(' ');
    }
    out
}

fn trigram_counts(text: &str) -> HashMap<String, u64> {
    let chars = normalize_for_trigrams(text);
    let mut counts: HashMap<String, u64> = HashMap::new();
    for w in chars.windows(3) {
        if w.iter().all(|&c| c == ' ') {
            continue;
        }
        *counts.entry(w.iter().collect()).or_insert(0) += 1;
    }
    counts
}

/// Scores `text` against every profile.
///
/// Returns a probability per profile language, summing to one. Errors when
/// the text carries fewer than [`MIN_DETECTABLE_CHARS`] non-whitespace
/// characters or fewer than two profiles are supplied.
pub fn detect_language(
    text: &str,
    profiles: &[LanguageProfile],
) -> Result<BTreeMap<String, f64>, MetricsError> {
    let got = text.chars().filter(|c| !c.is_whitespace()).count();
    if got < MIN_DETECTABLE_CHARS {
        return Err(MetricsError::TextTooShort { needed: MIN_DETECTABLE_CHARS, got });
    }
    if profiles.len() < 2 {
        return Err(MetricsError::NeedTwoProfiles);
    }

    let counts = trigram_counts(text);
    let norm = (counts.values().map(|&c| (c * c) as f64).sum::<f64>()).sqrt();
    let probe: BTreeMap<String, f64> = counts
        .into_iter()
        .map(|(g, c)| (g, c as f64 / norm.max(1.0)))
        .collect();

    // Softmax over scaled cosines, computed stably against the maximum.
    let sims: Vec<(String, f64)> = profiles
        .iter()
        .map(|p| (p.language.clone(), p.cosine(&probe)))
        .collect();
    let max_sim = sims.iter().map(|(_, s)| *s).fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = sims
        .iter()
        .map(|(_, s)| (SOFTMAX_SHARPNESS * (s - max_sim)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    Ok(sims
        .into_iter()
        .zip(weights)
        .map(|((lang, _), w)| (lang, w / total))
        .collect())
}

/// Profiles for the eighteen bundled languages, built once from the corpora
/// shipped with this crate.
pub fn bundled_profiles() -> &'static [LanguageProfile] {
    static PROFILES: LazyLock<Vec<LanguageProfile>> = LazyLock::new(|| {
        BUNDLED_CORPORA
            .iter()
            .map(|(lang, corpus)| LanguageProfile::from_text(*lang, corpus))
            .collect()
    });
    &PROFILES
}

/// The raw corpus text a bundled profile was built from; test support.
#[cfg(test)]
pub(crate) fn bundled_corpus(lang: &str) -> Option<&'static str> {
    BUNDLED_CORPORA
        .iter()
        .find(|(l, _)| *l == lang)
        .map(|(_, c)| *c)
}

static BUNDLED_CORPORA: &[(&str, &str)] = &[
    ("ar", include_str!("../corpora/ar.txt")),
    ("bn", include_str!("../corpora/bn.txt")),
    ("de", include_str!("../corpora/de.txt")),
    ("en", include_str!("../corpora/en.txt")),
    ("es", include_str!("../corpora/es.txt")),
    ("fa", include_str!("../corpora/fa.txt")),
    ("fi", include_str!("../corpora/fi.txt")),
    ("fr", include_str!("../corpora/fr.txt")),
    ("hi", include_str!("../corpora/hi.txt")),
    ("id", include_str!("../corpora/id.txt")),
    ("ja", include_str!("../corpora/ja.txt")),
    ("ko", include_str!("../corpora/ko.txt")),
    ("ru", include_str!("../corpora/ru.txt")),
    ("sw", include_str!("../corpora/sw.txt")),
    ("te", include_str!("../corpora/te.txt")),
    ("th", include_str!("../corpora/th.txt")),
    ("yo", include_str!("../corpora/yo.txt")),
    ("zh", include_str!("../corpora/zh.txt")),
];
