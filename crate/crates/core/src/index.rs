//! Inverted index keyed by root (or by surface form for the no-stemming
//! baseline), with per-document counts for reduction statistics.
//!
//! Each document goes through normalize → tokenize → stop-word filter → key.
//! Documents are analyzed in parallel and merged in a single pass.
//!
//! The on-disk format is line oriented and fully sorted so that two builds
//! of the same corpus are byte-identical:
//!
//! ```text
//! # esair-index v1
//! # mode stem
//! @doc<TAB>doc_id<TAB>tokens<TAB>content_tokens<TAB>distinct_keys
//! key<TAB>doc_id:tf,doc_id:tf
//! ```

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::normalize::words;
use crate::stemmer::stem;

const HEADER: &str = "# esair-index v1";
const DOC_MARK: &str = "@doc";

/// How index keys are derived from content tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexMode {
    /// Root from the stemmer.
    Stem,
    /// Normalized surface form, no stemming.
    Verbatim,
}

impl fmt::Display for IndexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexMode::Stem => "stem",
            IndexMode::Verbatim => "verbatim",
        })
    }
}

impl FromStr for IndexMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "stem" => Ok(IndexMode::Stem),
            "verbatim" => Ok(IndexMode::Verbatim),
            other => Err(format!("unknown index mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub raw_text: String,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, raw_text: impl Into<String>) -> Self {
        Document {
            doc_id: doc_id.into(),
            raw_text: raw_text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Posting {
    pub doc_id: String,
    pub tf: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct DocStats {
    pub token_count: usize,
    pub content_token_count: usize,
    pub distinct_stem_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionStats {
    /// Content tokens over all tokens.
    pub stop_word_ratio: f64,
    /// Distinct index keys over all tokens.
    pub index_ratio: f64,
}

impl ReductionStats {
    fn from_counts(tokens: usize, content: usize, distinct: usize) -> Self {
        let ratio = |n: usize| {
            if tokens == 0 {
                0.0
            } else {
                n as f64 / tokens as f64
            }
        };
        ReductionStats {
            stop_word_ratio: ratio(content),
            index_ratio: ratio(distinct),
        }
    }
}

/// The pipeline up to (but not including) keying: content tokens in order.
pub fn content_tokens(raw: &str, lex: &Lexicon) -> (usize, Vec<String>) {
    let all = words(raw);
    let total = all.len();
    let content = all.into_iter().filter(|w| !lex.is_stop_word(w)).collect();
    (total, content)
}

/// Keys for a list of content tokens, memoizing repeated surfaces.
pub fn keys_for(tokens: &[String], lex: &Lexicon, mode: IndexMode) -> Vec<String> {
    match mode {
        IndexMode::Verbatim => tokens.to_vec(),
        IndexMode::Stem => {
            let mut cache: HashMap<&str, String> = HashMap::new();
            tokens
                .iter()
                .map(|w| {
                    cache
                        .entry(w.as_str())
                        .or_insert_with(|| {
                            stem(w, lex).map(|r| r.root).unwrap_or_else(|_| w.clone())
                        })
                        .clone()
                })
                .collect()
        }
    }
}

struct Analyzed {
    doc_id: String,
    stats: DocStats,
    tf: BTreeMap<String, u32>,
}

fn analyze(doc: &Document, lex: &Lexicon, mode: IndexMode) -> Analyzed {
    let (token_count, content) = content_tokens(&doc.raw_text, lex);
    let mut tf: BTreeMap<String, u32> = BTreeMap::new();
    for key in keys_for(&content, lex, mode) {
        *tf.entry(key).or_default() += 1;
    }
    Analyzed {
        doc_id: doc.doc_id.clone(),
        stats: DocStats {
            token_count,
            content_token_count: content.len(),
            distinct_stem_count: tf.len(),
        },
        tf,
    }
}

fn check_doc_id(id: &str) -> Result<()> {
    if id.is_empty() || id.contains(['\t', '\n', '\r', ',']) {
        return Err(Error::InvalidDocId(id.to_string()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertedIndex {
    mode: IndexMode,
    postings: BTreeMap<String, Vec<Posting>>,
    doc_stats: BTreeMap<String, DocStats>,
}

pub fn build_index(docs: &[Document], lex: &Lexicon) -> Result<InvertedIndex> {
    InvertedIndex::build(docs, lex, IndexMode::Stem)
}

/// Surface-keyed index for the no-stemming baseline.
pub fn build_verbatim_index(docs: &[Document], lex: &Lexicon) -> Result<InvertedIndex> {
    InvertedIndex::build(docs, lex, IndexMode::Verbatim)
}

pub fn reduction_stats(index: &InvertedIndex, doc_id: &str) -> Result<ReductionStats> {
    index.reduction_stats(doc_id)
}

impl InvertedIndex {
    pub fn empty(mode: IndexMode) -> Self {
        InvertedIndex {
            mode,
            postings: BTreeMap::new(),
            doc_stats: BTreeMap::new(),
        }
    }

    pub fn build(docs: &[Document], lex: &Lexicon, mode: IndexMode) -> Result<Self> {
        let mut ids = HashSet::new();
        for doc in docs {
            check_doc_id(&doc.doc_id)?;
            if !ids.insert(doc.doc_id.as_str()) {
                return Err(Error::DuplicateDocId(doc.doc_id.clone()));
            }
        }

        let analyzed: Vec<Analyzed> = docs.par_iter().map(|d| analyze(d, lex, mode)).collect();

        let mut index = InvertedIndex::empty(mode);
        for a in analyzed {
            for (key, tf) in a.tf {
                index.postings.entry(key).or_default().push(Posting {
                    doc_id: a.doc_id.clone(),
                    tf,
                });
            }
            index.doc_stats.insert(a.doc_id, a.stats);
        }
        for list in index.postings.values_mut() {
            list.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        }
        Ok(index)
    }

    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    pub fn postings(&self, key: &str) -> &[Posting] {
        self.postings.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Keys with their posting lists, in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Posting])> {
        self.postings.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    pub fn key_count(&self) -> usize {
        self.postings.len()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.doc_stats.keys().map(String::as_str)
    }

    pub fn doc_count(&self) -> usize {
        self.doc_stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doc_stats.is_empty()
    }

    pub fn doc_stats(&self, doc_id: &str) -> Option<&DocStats> {
        self.doc_stats.get(doc_id)
    }

    /// Keys posted for one document.
    pub fn doc_keys(&self, doc_id: &str) -> Vec<&str> {
        self.postings
            .iter()
            .filter(|(_, list)| list.iter().any(|p| p.doc_id == doc_id))
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn reduction_stats(&self, doc_id: &str) -> Result<ReductionStats> {
        let s = self
            .doc_stats
            .get(doc_id)
            .ok_or_else(|| Error::UnknownDoc(doc_id.to_string()))?;
        Ok(ReductionStats::from_counts(
            s.token_count,
            s.content_token_count,
            s.distinct_stem_count,
        ))
    }

    /// Corpus-wide totals: all tokens, content tokens, distinct keys.
    pub fn corpus_counts(&self) -> DocStats {
        DocStats {
            token_count: self.doc_stats.values().map(|s| s.token_count).sum(),
            content_token_count: self.doc_stats.values().map(|s| s.content_token_count).sum(),
            distinct_stem_count: self.postings.len(),
        }
    }

    pub fn corpus_reduction_stats(&self) -> ReductionStats {
        let c = self.corpus_counts();
        ReductionStats::from_counts(c.token_count, c.content_token_count, c.distinct_stem_count)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{HEADER}")?;
        writeln!(out, "# mode {}", self.mode)?;
        for (id, s) in &self.doc_stats {
            writeln!(
                out,
                "{DOC_MARK}\t{id}\t{}\t{}\t{}",
                s.token_count, s.content_token_count, s.distinct_stem_count
            )?;
        }
        for (key, list) in &self.postings {
            write!(out, "{key}\t")?;
            for (i, p) in list.iter().enumerate() {
                if i > 0 {
                    out.write_all(b",")?;
                }
                write!(out, "{}:{}", p.doc_id, p.tf)?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("index text is UTF-8")
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let bad = |line: usize, reason: &str| Error::IndexFormat {
            line,
            reason: reason.to_string(),
        };
        let mut lines = input.lines().enumerate();
        match lines.next() {
            Some((_, Ok(l))) if l == HEADER => {}
            Some((_, Err(e))) => return Err(e.into()),
            _ => return Err(bad(1, "missing esair-index v1 header")),
        }
        let mode = match lines.next() {
            Some((_, Ok(l))) => l
                .strip_prefix("# mode ")
                .and_then(|m| m.parse().ok())
                .ok_or_else(|| bad(2, "missing or unknown mode line"))?,
            Some((_, Err(e))) => return Err(e.into()),
            None => return Err(bad(2, "missing mode line")),
        };

        let mut index = InvertedIndex::empty(mode);
        for (i, line) in lines {
            let n = i + 1;
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let head = fields.next().unwrap_or_default();
            if head == DOC_MARK {
                let parts: Vec<&str> = fields.collect();
                let [id, tokens, content, distinct] = parts[..] else {
                    return Err(bad(n, "document line needs 4 fields"));
                };
                let num = |s: &str| s.parse::<usize>().map_err(|_| bad(n, "bad count"));
                let stats = DocStats {
                    token_count: num(tokens)?,
                    content_token_count: num(content)?,
                    distinct_stem_count: num(distinct)?,
                };
                if index.doc_stats.insert(id.to_string(), stats).is_some() {
                    return Err(Error::DuplicateDocId(id.to_string()));
                }
                continue;
            }
            let (Some(list), None) = (fields.next(), fields.next()) else {
                return Err(bad(n, "posting line needs key<TAB>postings"));
            };
            let mut postings = Vec::new();
            for entry in list.split(',') {
                let (id, tf) = entry
                    .rsplit_once(':')
                    .ok_or_else(|| bad(n, "posting must be doc_id:tf"))?;
                let tf: u32 = tf.parse().map_err(|_| bad(n, "bad term frequency"))?;
                if tf == 0 {
                    return Err(bad(n, "term frequency must be positive"));
                }
                if !index.doc_stats.contains_key(id) {
                    return Err(bad(n, "posting for undeclared document"));
                }
                postings.push(Posting {
                    doc_id: id.to_string(),
                    tf,
                });
            }
            if index.postings.insert(head.to_string(), postings).is_some() {
                return Err(bad(n, "duplicate key"));
            }
        }
        Ok(index)
    }
}
