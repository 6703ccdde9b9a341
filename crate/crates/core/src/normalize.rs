//! Orthographic normalization and word tokenization for Arabic text.
//!
//! Normalization is deliberately minimal:
//!
//! * short-vowel and other diacritic marks (U+064B..=U+0652) are removed,
//! * tatweel (U+0640) is removed,
//! * hamza-bearing alef forms (آ أ إ) become bare alef ا, except as the first
//!   letter of a word, where they are kept so that clitics such as أ and أس
//!   stay recognizable,
//! * word-final alef maqsura ى becomes ي,
//! * ta marbuta ة is kept, since it doubles as a suffix letter.
//!
//! Everything else passes through unchanged; [`tokenize`] then drops any run
//! of characters that are not Arabic letters.

use std::fmt;

use serde::Serialize;

const TATWEEL: char = '\u{0640}';
const ALEF: char = '\u{0627}';
const ALEF_MAQSURA: char = '\u{0649}';
const YEH: char = '\u{064A}';

fn is_mark(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{0652}') || c == TATWEEL
}

fn is_hamza_alef(c: char) -> bool {
    matches!(c, '\u{0622}' | '\u{0623}' | '\u{0625}')
}

/// Letters of the Arabic block, excluding marks, tatweel, digits and punctuation.
pub fn is_arabic_letter(c: char) -> bool {
    matches!(
        c,
        '\u{0621}'..='\u{063A}' | '\u{0641}'..='\u{064A}' | '\u{0671}'..='\u{06D3}' | '\u{06FA}'..='\u{06FC}'
    )
}

/// Text in canonical form. Only [`normalize_text`] constructs it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NormalizedText(String);

impl NormalizedText {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for NormalizedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for NormalizedText {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

pub fn normalize_text(raw: &str) -> NormalizedText {
    let stripped: Vec<char> = raw.chars().filter(|&c| !is_mark(c)).collect();
    let mut out = String::with_capacity(raw.len());
    for (i, &c) in stripped.iter().enumerate() {
        let prev_is_letter = i > 0 && is_arabic_letter(stripped[i - 1]);
        let next_is_letter = stripped.get(i + 1).is_some_and(|&n| is_arabic_letter(n));
        let mapped = if is_hamza_alef(c) && prev_is_letter {
            ALEF
        } else if c == ALEF_MAQSURA && !next_is_letter {
            YEH
        } else {
            c
        };
        out.push(mapped);
    }
    NormalizedText(out)
}

/// Normalize a single dictionary entry or query word.
pub fn normalize_word(word: &str) -> String {
    normalize_text(word).into_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    pub position: usize,
}

/// Split normalized text into maximal runs of Arabic letters.
pub fn tokenize(text: &NormalizedText) -> Vec<Token> {
    text.as_str()
        .split(|c: char| !is_arabic_letter(c))
        .filter(|run| !run.is_empty())
        .enumerate()
        .map(|(position, run)| Token {
            surface: run.to_string(),
            position,
        })
        .collect()
}

/// Normalize then tokenize, returning only the surfaces.
pub fn words(raw: &str) -> Vec<String> {
    tokenize(&normalize_text(raw))
        .into_iter()
        .map(|t| t.surface)
        .collect()
}
