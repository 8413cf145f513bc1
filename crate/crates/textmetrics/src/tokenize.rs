//! Tokenization shared by the overlap metrics.
//!
//! Overlap scores are computed across nineteen languages, several of which
//! do not delimit words with spaces. The default mode therefore normalizes
//! to NFC, lowercases, strips punctuation, splits on whitespace — and
//! breaks runs of Han, Kana, and Thai characters into single-character
//! tokens, which is the standard word-free treatment for those scripts.

use unicode_normalization::UnicodeNormalization;

/// How text becomes tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TokenizerMode {
    /// Script-aware: word tokens for space-delimited scripts,
    /// single-character tokens for Han/Kana/Thai.
    #[default]
    Auto,
    /// Plain whitespace splitting of the lowercased NFC text.
    Whitespace,
    /// Every non-whitespace character is its own token.
    Character,
}

/// Punctuation and bracket characters that separate tokens. ASCII
/// punctuation plus the common CJK, Arabic, and Devanagari marks; combining
/// marks and all other letters stay inside tokens.
pub(crate) fn is_separator(c: char) -> bool {
    c.is_whitespace()
        || c.is_ascii_punctuation()
        || matches!(
            c,
            '،' | '؛' | '؟' | '۔' | '।' | '॥' | '。' | '、' | '，' | '．' | '？' | '！'
                | '；' | '：' | '「' | '」' | '『' | '』' | '（' | '）' | '《' | '》'
                | '〈' | '〉' | '【' | '】' | '—' | '–' | '…' | '·' | '‘' | '’' | '“'
                | '”' | '¡' | '¿' | '«' | '»'
        )
}

/// Characters scored one-per-token: Han ideographs, Japanese kana, and the
/// Thai block.
fn is_unspaced_script(c: char) -> bool {
    matches!(
        c as u32,
        0x3400..=0x4DBF      // CJK extension A
        | 0x4E00..=0x9FFF    // CJK unified ideographs
        | 0xF900..=0xFAFF    // CJK compatibility ideographs
        | 0x20000..=0x2A6DF  // CJK extension B
        | 0x3040..=0x309F    // hiragana
        | 0x30A0..=0x30FF    // katakana
        | 0x31F0..=0x31FF    // katakana phonetic extensions
        | 0x0E00..=0x0E7F    // Thai
    )
}

/// Splits `text` into tokens under the given mode.
pub fn tokenize(text: &str, mode: TokenizerMode) -> Vec<String> {
    let normalized: String = text.nfc().collect::<String>().to_lowercase();

    match mode {
        TokenizerMode::Whitespace => normalized
            .split_whitespace()
            .map(|s| s.to_string())
            .collect(),
        TokenizerMode::Character => normalized
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(String::from)
            .collect(),
        TokenizerMode::Auto => {
            let mut tokens = Vec::new();
            let mut word = String::new();
            for c in normalized.chars() {
                if is_separator(c) {
                    if !word.is_empty() {
                        tokens.push(std::mem::take(&mut word));
                    }
                } else if is_unspaced_script(c) {
                    if !word.is_empty() {
                        tokens.push(std::mem::take(&mut word));
                    }
                    tokens.push(c.to_string());
                } else {
                    word.push(c);
                }
            }
            if !word.is_empty() {
                tokens.push(word);
            }
            tokens
        }
    }
}
