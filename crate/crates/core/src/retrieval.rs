//! Query analysis and matching against an [`InvertedIndex`].
//!
//! Documents are ranked by the number of distinct query keys they contain,
//! then by the summed term frequency of those keys, then by doc id.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{content_tokens, keys_for, IndexMode, InvertedIndex};
use crate::lexicon::Lexicon;

pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub raw: String,
    /// Distinct keys in first-occurrence order.
    pub stems: Vec<String>,
    pub mode: IndexMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub doc_id: String,
    pub rank: usize,
    pub matched_stems: usize,
    pub score: u64,
}

pub fn analyze_query(raw: &str, lex: &Lexicon, mode: IndexMode) -> Result<Query> {
    let (_, content) = content_tokens(raw, lex);
    let mut seen = BTreeSet::new();
    let stems: Vec<String> = keys_for(&content, lex, mode)
        .into_iter()
        .filter(|k| seen.insert(k.clone()))
        .collect();
    if stems.is_empty() {
        return Err(Error::EmptyQuery);
    }
    Ok(Query {
        raw: raw.to_string(),
        stems,
        mode,
    })
}

pub fn process_query(raw: &str, lex: &Lexicon) -> Result<Query> {
    analyze_query(raw, lex, IndexMode::Stem)
}

pub fn process_query_verbatim(raw: &str, lex: &Lexicon) -> Result<Query> {
    analyze_query(raw, lex, IndexMode::Verbatim)
}

/// Top `k` documents sharing at least one key with the query. The index and
/// the query must use the same keying mode.
pub fn search(index: &InvertedIndex, query: &Query, k: usize) -> Vec<SearchResult> {
    debug_assert_eq!(index.mode(), query.mode, "index/query mode mismatch");
    let mut hits: BTreeMap<&str, (usize, u64)> = BTreeMap::new();
    for key in &query.stems {
        for p in index.postings(key) {
            let e = hits.entry(p.doc_id.as_str()).or_default();
            e.0 += 1;
            e.1 += u64::from(p.tf);
        }
    }
    let mut ranked: Vec<(&str, usize, u64)> =
        hits.into_iter().map(|(d, (m, s))| (d, m, s)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(b.2.cmp(&a.2)).then(a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (doc_id, matched_stems, score))| SearchResult {
            doc_id: doc_id.to_string(),
            rank: i + 1,
            matched_stems,
            score,
        })
        .collect()
}

/// The no-stemming baseline: a surface-keyed index queried with surface forms.
pub fn search_verbatim(index_raw: &InvertedIndex, q_raw: &Query, k: usize) -> Vec<SearchResult> {
    search(index_raw, q_raw, k)
}
