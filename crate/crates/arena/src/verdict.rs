//! Extraction of final verdicts from judge output text.

use crate::ArenaError;
use ragrank_core::Verdict;

/// Maximum snippet length echoed back in [`ArenaError::UnparseableVerdict`].
const SNIPPET_LEN: usize = 80;

/// Extracts the final `[[A]]`, `[[B]]`, or `[[C]]` marker from judge output
/// and maps it to a [`Verdict`], undoing a position swap if one was applied.
///
/// Judges are asked to end their output with exactly one double-bracketed
/// verdict, but chatty judges sometimes mention markers mid-explanation; the
/// *last* occurrence is authoritative. `[[C]]` denotes a tie. When `swapped`
/// is true the judge saw the two answers in exchanged positions, so `[[A]]`
/// and `[[B]]` refer to the swapped presentation and are flipped back here;
/// ties are unaffected.
pub fn canonicalize_verdict(raw: &str, swapped: bool) -> Result<Verdict, ArenaError> {
    let markers: [(&str, Verdict); 3] = [
        ("[[A]]", Verdict::WinA),
        ("[[B]]", Verdict::WinB),
        ("[[C]]", Verdict::Tie),
    ];

    let mut last: Option<(usize, Verdict)> = None;
    for (needle, verdict) in markers {
        if let Some(pos) = raw.rfind(needle) {
            if last.is_none_or(|(best, _)| pos > best) {
                last = Some((pos, verdict));
            }
        }
    }

    match last {
        Some((_, verdict)) => Ok(if swapped { verdict.flipped() } else { verdict }),
        None => Err(ArenaError::UnparseableVerdict {
            snippet: raw.chars().take(SNIPPET_LEN).collect(),
        }),
    }
}
