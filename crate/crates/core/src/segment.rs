//! Word cutting: word → proclitic + base1 + enclitic, then
//! base1 → prefix + base2 + suffix.
//!
//! Each stage lists every pair drawn from the lexicon that frames the word,
//! drops pairs whose concatenation is in the stage's incompatibility table,
//! and orders the survivors longest-strip first: descending total stripped
//! letters, then descending left part, then base string. The trivial split
//! (nothing stripped) is always produced and always sorts last.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::{IncompatKind, Lexicon};

/// Minimum letters left in base2; a root needs at least two.
pub const MIN_BASE2_LEN: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CliticSplit {
    pub proclitic: String,
    pub base1: String,
    pub enclitic: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffixSplit {
    pub prefix: String,
    pub base2: String,
    pub suffix: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Segmentation {
    pub proclitic: String,
    pub prefix: String,
    pub base2: String,
    pub suffix: String,
    pub enclitic: String,
}

impl Segmentation {
    /// The whole word as base2, nothing stripped.
    pub fn trivial(word: &str) -> Self {
        Segmentation {
            proclitic: String::new(),
            prefix: String::new(),
            base2: word.to_string(),
            suffix: String::new(),
            enclitic: String::new(),
        }
    }

    pub fn word(&self) -> String {
        [
            &self.proclitic,
            &self.prefix,
            &self.base2,
            &self.suffix,
            &self.enclitic,
        ]
        .into_iter()
        .map(String::as_str)
        .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.proclitic.is_empty()
            && self.prefix.is_empty()
            && self.suffix.is_empty()
            && self.enclitic.is_empty()
    }
}

fn letters(s: &str) -> usize {
    s.chars().count()
}

/// (left, middle, right) triples framing `word`, filtered and ordered.
fn frame_splits(
    word: &str,
    lefts: &BTreeSet<String>,
    rights: &BTreeSet<String>,
    kind: IncompatKind,
    lex: &Lexicon,
    min_middle: usize,
) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for left in lefts.iter().filter(|l| word.starts_with(l.as_str())) {
        let rest = &word[left.len()..];
        for right in rights.iter().filter(|r| rest.ends_with(r.as_str())) {
            let middle = &rest[..rest.len() - right.len()];
            if letters(middle) < min_middle || lex.is_incompatible(kind, left, right) {
                continue;
            }
            out.push((left.clone(), middle.to_string(), right.clone()));
        }
    }
    out.sort_by_cached_key(|(l, m, r)| {
        let (ll, rl) = (letters(l), letters(r));
        (Reverse(ll + rl), Reverse(ll), m.clone())
    });
    out
}

pub fn enumerate_clitic_splits(word: &str, lex: &Lexicon) -> Result<Vec<CliticSplit>> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(frame_splits(
        word,
        lex.proclitics(),
        lex.enclitics(),
        IncompatKind::Clitic,
        lex,
        1,
    )
    .into_iter()
    .map(|(proclitic, base1, enclitic)| CliticSplit {
        proclitic,
        base1,
        enclitic,
    })
    .collect())
}

/// Affix splits of base1. A one-letter base1 has none, since base2 must keep
/// [`MIN_BASE2_LEN`] letters.
pub fn enumerate_affix_splits(base1: &str, lex: &Lexicon) -> Result<Vec<AffixSplit>> {
    if base1.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(frame_splits(
        base1,
        lex.prefixes(),
        lex.suffixes(),
        IncompatKind::Affix,
        lex,
        MIN_BASE2_LEN,
    )
    .into_iter()
    .map(|(prefix, base2, suffix)| AffixSplit {
        prefix,
        base2,
        suffix,
    })
    .collect())
}

/// Every clitic split crossed with the affix splits of its base1, in
/// clitic-major order. Words shorter than two letters yield nothing.
pub fn enumerate_segmentations(word: &str, lex: &Lexicon) -> Result<Vec<Segmentation>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for clitic in enumerate_clitic_splits(word, lex)? {
        for affix in enumerate_affix_splits(&clitic.base1, lex)? {
            let seg = Segmentation {
                proclitic: clitic.proclitic.clone(),
                prefix: affix.prefix,
                base2: affix.base2,
                suffix: affix.suffix,
                enclitic: clitic.enclitic.clone(),
            };
            if seen.insert(seg.clone()) {
                out.push(seg);
            }
        }
    }
    Ok(out)
}
