//! Retrieval and stemming metrics: precision, recall, silence, stemming
//! accuracy and interpolated 11-point precision, plus readers for qrels,
//! query and gold-root files.
//!
//! Silence is the share of relevant documents that were not retrieved, so
//! it is always `1 - recall`. Counting uses set semantics over the returned
//! list; only the 11-point curve depends on rank order.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::retrieval::SearchResult;

pub type Qrels = BTreeMap<String, BTreeSet<String>>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalMetrics {
    pub precision: f64,
    pub recall: f64,
    pub silence: f64,
    pub retrieved: usize,
    pub relevant: usize,
    pub relevant_retrieved: usize,
}

impl EvalMetrics {
    pub fn from_counts(retrieved: usize, relevant: usize, relevant_retrieved: usize) -> Result<Self> {
        if relevant == 0 {
            return Err(Error::EmptyRelevantSet);
        }
        let mut m = EvalMetrics {
            precision: 0.0,
            recall: 0.0,
            silence: 0.0,
            retrieved,
            relevant,
            relevant_retrieved,
        };
        m.precision = to_f64(m.precision_exact());
        m.recall = to_f64(m.recall_exact());
        m.silence = to_f64(m.silence_exact());
        Ok(m)
    }

    /// relevant_retrieved / retrieved, or 0 when nothing was retrieved.
    pub fn precision_exact(&self) -> Ratio<u64> {
        if self.retrieved == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(self.relevant_retrieved as u64, self.retrieved as u64)
        }
    }

    pub fn recall_exact(&self) -> Ratio<u64> {
        Ratio::new(self.relevant_retrieved as u64, self.relevant as u64)
    }

    pub fn silence_exact(&self) -> Ratio<u64> {
        Ratio::new(
            (self.relevant - self.relevant_retrieved) as u64,
            self.relevant as u64,
        )
    }
}

fn to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StemAccuracy {
    pub correct: usize,
    pub total_valid: usize,
    pub accuracy: f64,
}

impl StemAccuracy {
    pub fn exact(&self) -> Ratio<u64> {
        Ratio::new(self.correct as u64, self.total_valid as u64)
    }
}

/// Metrics over the doc ids of `results`, duplicates counted once.
pub fn eval_query(results: &[SearchResult], relevant: &BTreeSet<String>) -> Result<EvalMetrics> {
    eval_doc_ids(results.iter().map(|r| r.doc_id.as_str()), relevant)
}

pub fn eval_doc_ids<'a, I>(retrieved: I, relevant: &BTreeSet<String>) -> Result<EvalMetrics>
where
    I: IntoIterator<Item = &'a str>,
{
    if relevant.is_empty() {
        return Err(Error::EmptyRelevantSet);
    }
    let retrieved: BTreeSet<&str> = retrieved.into_iter().collect();
    let hits = retrieved
        .iter()
        .filter(|d| relevant.contains(**d))
        .count();
    EvalMetrics::from_counts(retrieved.len(), relevant.len(), hits)
}

pub fn stem_accuracy(
    predictions: &[(String, String)],
    gold: &HashMap<String, String>,
) -> Result<StemAccuracy> {
    if predictions.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut correct = 0;
    for (word, root) in predictions {
        let expected = gold
            .get(word)
            .ok_or_else(|| Error::MissingGold(word.clone()))?;
        if expected == root {
            correct += 1;
        }
    }
    Ok(StemAccuracy {
        correct,
        total_valid: predictions.len(),
        accuracy: correct as f64 / predictions.len() as f64,
    })
}

pub const RECALL_LEVELS: usize = 11;

/// Interpolated precision at recall 0.0, 0.1, ..., 1.0: the best precision
/// at any rank whose recall reaches the level, 0 if none does.
pub fn eleven_point_precision<S: AsRef<str>>(
    ranked: &[S],
    relevant: &BTreeSet<String>,
) -> Result<[f64; RECALL_LEVELS]> {
    if relevant.is_empty() {
        return Err(Error::EmptyRelevantSet);
    }
    let total = relevant.len();
    let mut seen = BTreeSet::new();
    let mut hits = 0usize;
    // (hits, rank) after each position
    let mut points = Vec::with_capacity(ranked.len());
    for doc in ranked {
        let doc = doc.as_ref();
        if !seen.insert(doc) {
            continue;
        }
        if relevant.contains(doc) {
            hits += 1;
        }
        points.push((hits, seen.len()));
    }

    let mut curve = [0.0; RECALL_LEVELS];
    for (level, value) in curve.iter_mut().enumerate() {
        // recall >= level/10  <=>  10 * hits >= level * total
        *value = points
            .iter()
            .filter(|(h, _)| 10 * h >= level * total)
            .map(|&(h, n)| h as f64 / n as f64)
            .fold(0.0, f64::max);
    }
    Ok(curve)
}

pub fn eleven_point_for_results(
    results: &[SearchResult],
    relevant: &BTreeSet<String>,
) -> Result<[f64; RECALL_LEVELS]> {
    let ids: Vec<&str> = results.iter().map(|r| r.doc_id.as_str()).collect();
    eleven_point_precision(&ids, relevant)
}

/// Pointwise mean of several 11-point curves.
pub fn mean_curve(curves: &[[f64; RECALL_LEVELS]]) -> Result<[f64; RECALL_LEVELS]> {
    if curves.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut out = [0.0; RECALL_LEVELS];
    for c in curves {
        for (o, v) in out.iter_mut().zip(c) {
            *o += v;
        }
    }
    for o in &mut out {
        *o /= curves.len() as f64;
    }
    Ok(out)
}

/// Arithmetic mean of precision and recall across queries; silence is
/// recomputed as `1 - mean recall` and counts are summed.
pub fn macro_average(per_query: &[EvalMetrics]) -> Result<EvalMetrics> {
    if per_query.is_empty() {
        return Err(Error::EmptyList);
    }
    let n = per_query.len() as f64;
    let recall = per_query.iter().map(|m| m.recall).sum::<f64>() / n;
    Ok(EvalMetrics {
        precision: per_query.iter().map(|m| m.precision).sum::<f64>() / n,
        recall,
        silence: 1.0 - recall,
        retrieved: per_query.iter().map(|m| m.retrieved).sum(),
        relevant: per_query.iter().map(|m| m.relevant).sum(),
        relevant_retrieved: per_query.iter().map(|m| m.relevant_retrieved).sum(),
    })
}

fn tab_pairs<'a>(
    name: &'a str,
    text: &'a str,
) -> impl Iterator<Item = Result<(usize, &'a str, &'a str)>> + 'a {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(move |(n, l)| {
            let (a, b) = l.split_once('\t').ok_or_else(|| Error::MalformedLine {
                file: name.to_string(),
                line: n,
                reason: "expected two tab-separated fields".into(),
            })?;
            let (a, b) = (a.trim(), b.trim());
            if a.is_empty() || b.is_empty() || b.contains('\t') {
                return Err(Error::MalformedLine {
                    file: name.to_string(),
                    line: n,
                    reason: "expected two non-empty tab-separated fields".into(),
                });
            }
            Ok((n, a, b))
        })
}

/// `query_id<TAB>doc_id` per line.
pub fn parse_qrels(name: &str, text: &str) -> Result<Qrels> {
    let mut qrels = Qrels::new();
    for item in tab_pairs(name, text) {
        let (_, q, d) = item?;
        qrels.entry(q.to_string()).or_default().insert(d.to_string());
    }
    Ok(qrels)
}

/// `query_id<TAB>query text` per line, in file order.
pub fn parse_queries(name: &str, text: &str) -> Result<Vec<(String, String)>> {
    tab_pairs(name, text)
        .map(|item| item.map(|(_, q, t)| (q.to_string(), t.to_string())))
        .collect()
}

/// `word<TAB>root` per line; words and roots are normalized.
pub fn parse_gold_roots(name: &str, text: &str) -> Result<Vec<(String, String)>> {
    use crate::normalize::normalize_word;
    tab_pairs(name, text)
        .map(|item| item.map(|(_, w, r)| (normalize_word(w), normalize_word(r))))
        .collect()
}
