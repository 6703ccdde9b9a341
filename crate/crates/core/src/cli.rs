//! The `esair` command line: `stem`, `index`, `search`, `eval` and `stats`.
//!
//! Data goes to the writer passed to [`run`], diagnostics to stderr.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use walkdir::WalkDir;

use crate::eval::{
    eleven_point_for_results, eval_query, macro_average, mean_curve, parse_gold_roots,
    parse_qrels, parse_queries, stem_accuracy, EvalMetrics, StemAccuracy, RECALL_LEVELS,
};
use crate::index::{content_tokens, Document, IndexMode, InvertedIndex, ReductionStats};
use crate::lexicon::Lexicon;
use crate::normalize::words;
use crate::retrieval::{analyze_query, search, SearchResult, DEFAULT_K};
use crate::stemmer::stem;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "esair", version, about = "Template-based Arabic stemming, indexing and retrieval evaluation")]
pub struct Cli {
    /// Lexicon directory; the built-in seed lexicon is used when omitted.
    #[arg(long, global = true, env = "ESAIR_LEXICON_DIR", value_name = "DIR")]
    pub lexicon: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "json", env = "ESAIR_FORMAT")]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stem words given as arguments, or every word read from stdin.
    Stem { words: Vec<String> },

    /// Index a directory of .txt files and report reduction ratios.
    Index {
        #[arg(long, env = "ESAIR_CORPUS_DIR", value_name = "DIR")]
        corpus: PathBuf,
        #[arg(long, env = "ESAIR_INDEX", value_name = "FILE")]
        index: PathBuf,
        /// Key the index on surface forms instead of roots.
        #[arg(long)]
        no_stem: bool,
    },

    /// Rank documents for a query.
    Search {
        #[arg(required = true)]
        query: Vec<String>,
        #[arg(long, env = "ESAIR_INDEX", value_name = "FILE")]
        index: Option<PathBuf>,
        /// Build the index in memory from this corpus instead of reading a file.
        #[arg(long, env = "ESAIR_CORPUS_DIR", value_name = "DIR")]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
        #[arg(long)]
        no_stem: bool,
    },

    /// Score queries against relevance judgments.
    Eval {
        /// query_id<TAB>query text per line.
        #[arg(long, value_name = "FILE")]
        queries: PathBuf,
        /// query_id<TAB>doc_id per line.
        #[arg(long, value_name = "FILE")]
        qrels: PathBuf,
        /// word<TAB>root per line, for stemming accuracy.
        #[arg(long, value_name = "FILE")]
        gold: Option<PathBuf>,
        #[arg(long, env = "ESAIR_INDEX", value_name = "FILE")]
        index: Option<PathBuf>,
        #[arg(long, env = "ESAIR_CORPUS_DIR", value_name = "DIR")]
        corpus: Option<PathBuf>,
        /// Cut each ranking at k; by default every matching document counts.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        no_stem: bool,
        /// Evaluate both the stemmed and the verbatim run (needs --corpus).
        #[arg(long, conflicts_with = "no_stem")]
        compare: bool,
    },

    /// Print reduction ratios stored in an index file.
    Stats {
        #[arg(long, env = "ESAIR_INDEX", value_name = "FILE")]
        index: PathBuf,
    },
}

fn mode_for(no_stem: bool) -> IndexMode {
    if no_stem {
        IndexMode::Verbatim
    } else {
        IndexMode::Stem
    }
}

fn run_label(mode: IndexMode) -> &'static str {
    match mode {
        IndexMode::Stem => "ESAIR",
        IndexMode::Verbatim => "NoStem",
    }
}

pub fn load_lexicon(dir: Option<&Path>) -> Result<Lexicon> {
    match dir {
        Some(dir) => Lexicon::load_dir(dir)
            .with_context(|| format!("loading lexicon from {}", dir.display())),
        None => Ok(Lexicon::seed()),
    }
}

/// Every `.txt` file under `dir`, sorted by path; doc id is the file stem.
pub fn read_corpus(dir: &Path) -> Result<Vec<Document>> {
    if !dir.is_dir() {
        bail!("corpus directory {} not found", dir.display());
    }
    let mut paths = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.with_context(|| format!("reading {}", dir.display()))?;
        let path = entry.path();
        if entry.file_type().is_file() && path.extension().is_some_and(|e| e == "txt") {
            paths.push(path.to_path_buf());
        }
    }
    if paths.is_empty() {
        bail!("no .txt documents in {}", dir.display());
    }
    let mut docs = Vec::with_capacity(paths.len());
    for path in paths {
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .with_context(|| format!("non UTF-8 file name {}", path.display()))?
            .to_string();
        let text = fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        docs.push(Document::new(id, text));
    }
    Ok(docs)
}

fn read_index(path: &Path) -> Result<InvertedIndex> {
    let file = fs::File::open(path).with_context(|| format!("opening index {}", path.display()))?;
    InvertedIndex::read_from(BufReader::new(file))
        .with_context(|| format!("reading index {}", path.display()))
}

fn obtain_index(
    index: Option<&Path>,
    corpus: Option<&Path>,
    lex: &Lexicon,
    mode: IndexMode,
) -> Result<InvertedIndex> {
    match (index, corpus) {
        (Some(path), _) => {
            let idx = read_index(path)?;
            if idx.mode() != mode {
                bail!(
                    "index {} was built in {} mode; rebuild it{} or change --no-stem",
                    path.display(),
                    idx.mode(),
                    if mode == IndexMode::Verbatim { " with --no-stem" } else { " without --no-stem" }
                );
            }
            Ok(idx)
        }
        (None, Some(dir)) => Ok(InvertedIndex::build(&read_corpus(dir)?, lex, mode)?),
        (None, None) => bail!("either --index or --corpus is required"),
    }
}

fn json_line<W: Write + ?Sized, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn run(cli: Cli, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<()> {
    let lex = load_lexicon(cli.lexicon.as_deref())?;
    let format = cli.format;
    match cli.command {
        Command::Stem { words: args } => cmd_stem(&lex, args, stdin, format, out),
        Command::Index {
            corpus,
            index,
            no_stem,
        } => cmd_index(&lex, &corpus, &index, mode_for(no_stem), format, out),
        Command::Search {
            query,
            index,
            corpus,
            k,
            no_stem,
        } => {
            let mode = mode_for(no_stem);
            let idx = obtain_index(index.as_deref(), corpus.as_deref(), &lex, mode)?;
            cmd_search(&lex, &idx, &query.join(" "), k, format, out)
        }
        Command::Eval {
            queries,
            qrels,
            gold,
            index,
            corpus,
            k,
            no_stem,
            compare,
        } => {
            let queries_text = fs::read_to_string(&queries)
                .with_context(|| format!("reading {}", queries.display()))?;
            let queries_list = parse_queries(&queries.display().to_string(), &queries_text)?;
            let qrels_text = fs::read_to_string(&qrels)
                .with_context(|| format!("reading {}", qrels.display()))?;
            let judgments = parse_qrels(&qrels.display().to_string(), &qrels_text)?;

            let docs = corpus.as_deref().map(read_corpus).transpose()?;
            let mut runs = Vec::new();
            let modes: Vec<IndexMode> = if compare {
                if docs.is_none() {
                    bail!("--compare needs --corpus");
                }
                vec![IndexMode::Stem, IndexMode::Verbatim]
            } else {
                vec![mode_for(no_stem)]
            };
            for mode in modes {
                let idx = match (&docs, index.as_deref()) {
                    (Some(docs), None) => InvertedIndex::build(docs, &lex, mode)?,
                    (_, idx_path) => obtain_index(idx_path, corpus.as_deref(), &lex, mode)?,
                };
                runs.push(evaluate_run(&lex, &idx, &queries_list, &judgments, k)?);
            }

            let accuracy = match &gold {
                Some(path) => Some(gold_report(&lex, path, docs.as_deref())?),
                None => None,
            };
            write_eval(&runs, accuracy.as_ref(), format, out)
        }
        Command::Stats { index } => {
            let idx = read_index(&index)?;
            write_reduction(&idx, format, out)
        }
    }
}

fn cmd_stem(
    lex: &Lexicon,
    args: Vec<String>,
    stdin: &mut dyn BufRead,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<()> {
    let input: Vec<String> = if args.is_empty() {
        let mut text = String::new();
        stdin.read_to_string(&mut text).context("reading stdin")?;
        words(&text)
    } else {
        args.iter().flat_map(|a| words(a)).collect()
    };
    for word in input {
        let result = stem(&word, lex)?;
        let rec = result.record();
        match format {
            OutputFormat::Json => json_line(out, &rec)?,
            OutputFormat::Table => {
                let mut flags = Vec::new();
                if rec.validated {
                    flags.push("validated");
                }
                if rec.fallback {
                    flags.push("fallback");
                }
                writeln!(
                    out,
                    "{}\t{}|{}|{}|{}|{}\t{}\t{}\t{}\t{}",
                    rec.word,
                    rec.proclitic,
                    rec.prefix,
                    rec.base,
                    rec.suffix,
                    rec.enclitic,
                    rec.template.unwrap_or("-"),
                    rec.infix_positions.as_deref().unwrap_or("-"),
                    rec.root,
                    if flags.is_empty() { "-".to_string() } else { flags.join(",") }
                )?;
            }
        }
    }
    Ok(())
}

fn cmd_index(
    lex: &Lexicon,
    corpus: &Path,
    index_path: &Path,
    mode: IndexMode,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<()> {
    let docs = read_corpus(corpus)?;
    let idx = InvertedIndex::build(&docs, lex, mode)?;
    if let Some(parent) = index_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let file = fs::File::create(index_path)
        .with_context(|| format!("creating {}", index_path.display()))?;
    let mut w = std::io::BufWriter::new(file);
    idx.write_to(&mut w)?;
    w.flush()?;
    write_reduction(&idx, format, out)
}

#[derive(Serialize)]
struct ReductionRow<'a> {
    doc_id: &'a str,
    tokens: usize,
    content_tokens: usize,
    distinct_stems: usize,
    #[serde(flatten)]
    ratios: ReductionStats,
}

fn write_reduction(idx: &InvertedIndex, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
    let mut rows = Vec::new();
    for id in idx.doc_ids() {
        let s = idx.doc_stats(id).expect("listed doc has stats");
        rows.push(ReductionRow {
            doc_id: id,
            tokens: s.token_count,
            content_tokens: s.content_token_count,
            distinct_stems: s.distinct_stem_count,
            ratios: idx.reduction_stats(id)?,
        });
    }
    let c = idx.corpus_counts();
    let corpus = ReductionRow {
        doc_id: "*",
        tokens: c.token_count,
        content_tokens: c.content_token_count,
        distinct_stems: c.distinct_stem_count,
        ratios: idx.corpus_reduction_stats(),
    };
    match format {
        OutputFormat::Json => {
            for row in rows.iter().chain(std::iter::once(&corpus)) {
                json_line(out, row)?;
            }
        }
        OutputFormat::Table => {
            let width = rows.iter().map(|r| r.doc_id.chars().count()).max().unwrap_or(0).max(6);
            writeln!(
                out,
                "{:<width$}  {:>7}  {:>7}  {:>7}  {:>9}  {:>9}",
                "doc", "tokens", "content", "stems", "content%", "index%"
            )?;
            for row in rows.iter().chain(std::iter::once(&corpus)) {
                let name = if row.doc_id == "*" { "corpus" } else { row.doc_id };
                writeln!(
                    out,
                    "{:<width$}  {:>7}  {:>7}  {:>7}  {:>8.1}%  {:>8.1}%",
                    name,
                    row.tokens,
                    row.content_tokens,
                    row.distinct_stems,
                    row.ratios.stop_word_ratio * 100.0,
                    row.ratios.index_ratio * 100.0
                )?;
            }
        }
    }
    Ok(())
}

fn cmd_search(
    lex: &Lexicon,
    idx: &InvertedIndex,
    query: &str,
    k: usize,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<()> {
    let q = analyze_query(query, lex, idx.mode())?;
    let hits = search(idx, &q, k);
    match format {
        OutputFormat::Json => {
            for h in &hits {
                json_line(out, h)?;
            }
        }
        OutputFormat::Table => {
            for h in &hits {
                writeln!(out, "{}\t{}\t{}\t{}", h.rank, h.doc_id, h.matched_stems, h.score)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct QueryEval {
    pub query_id: String,
    #[serde(flatten)]
    pub metrics: EvalMetrics,
}

#[derive(Debug, Serialize)]
pub struct RunEval {
    pub stemmer: &'static str,
    pub queries: Vec<QueryEval>,
    pub average: EvalMetrics,
    pub eleven_point: [f64; RECALL_LEVELS],
}

pub fn evaluate_run(
    lex: &Lexicon,
    idx: &InvertedIndex,
    queries: &[(String, String)],
    qrels: &crate::eval::Qrels,
    k: Option<usize>,
) -> Result<RunEval> {
    let k = k.unwrap_or(usize::MAX);
    let mut per_query = Vec::new();
    let mut curves = Vec::new();
    for (qid, text) in queries {
        let Some(relevant) = qrels.get(qid) else {
            eprintln!("esair: query {qid} has no relevance judgments, skipped");
            continue;
        };
        let hits: Vec<SearchResult> = match analyze_query(text, lex, idx.mode()) {
            Ok(q) => search(idx, &q, k),
            Err(Error::EmptyQuery) => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        per_query.push(QueryEval {
            query_id: qid.clone(),
            metrics: eval_query(&hits, relevant)?,
        });
        curves.push(eleven_point_for_results(&hits, relevant)?);
    }
    if per_query.is_empty() {
        bail!("no judged queries to evaluate");
    }
    let metrics: Vec<EvalMetrics> = per_query.iter().map(|q| q.metrics).collect();
    Ok(RunEval {
        stemmer: run_label(idx.mode()),
        average: macro_average(&metrics)?,
        eleven_point: mean_curve(&curves)?,
        queries: per_query,
    })
}

#[derive(Debug, Serialize)]
pub struct DocAccuracy {
    pub doc_id: String,
    #[serde(flatten)]
    pub accuracy: StemAccuracy,
}

#[derive(Debug, Serialize)]
pub struct AccuracyReport {
    pub overall: StemAccuracy,
    pub documents: Vec<DocAccuracy>,
}

/// Accuracy over the gold word list, and per document over content tokens
/// that have a gold root.
fn gold_report(lex: &Lexicon, path: &Path, docs: Option<&[Document]>) -> Result<AccuracyReport> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let pairs = parse_gold_roots(&path.display().to_string(), &text)?;
    let gold: HashMap<String, String> = pairs.iter().cloned().collect();

    let predict = |words: &mut dyn Iterator<Item = &String>| -> Result<Vec<(String, String)>> {
        words
            .map(|w| Ok((w.clone(), stem(w, lex)?.root)))
            .collect::<Result<Vec<_>>>()
    };
    let overall = stem_accuracy(&predict(&mut pairs.iter().map(|(w, _)| w))?, &gold)?;

    let mut documents = Vec::new();
    for doc in docs.unwrap_or_default() {
        let (_, content) = content_tokens(&doc.raw_text, lex);
        let judged: Vec<&String> = content.iter().filter(|w| gold.contains_key(*w)).collect();
        if judged.is_empty() {
            continue;
        }
        documents.push(DocAccuracy {
            doc_id: doc.doc_id.clone(),
            accuracy: stem_accuracy(&predict(&mut judged.into_iter())?, &gold)?,
        });
    }
    Ok(AccuracyReport { overall, documents })
}

fn write_eval(
    runs: &[RunEval],
    accuracy: Option<&AccuracyReport>,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<()> {
    match format {
        OutputFormat::Json => {
            json_line(out, &json!({ "runs": runs, "accuracy": accuracy }))?;
        }
        OutputFormat::Table => {
            let mut s = String::new();
            for run in runs {
                let _ = writeln!(s, "# {}", run.stemmer);
                let _ = writeln!(
                    s,
                    "{:<12}  {:>9}  {:>9}  {:>9}  {:>9}  {:>8}  {:>8}",
                    "query", "precision", "recall", "silence", "retrieved", "relevant", "rel_ret"
                );
                for q in &run.queries {
                    let m = &q.metrics;
                    let _ = writeln!(
                        s,
                        "{:<12}  {:>9.4}  {:>9.4}  {:>9.4}  {:>9}  {:>8}  {:>8}",
                        q.query_id,
                        m.precision,
                        m.recall,
                        m.silence,
                        m.retrieved,
                        m.relevant,
                        m.relevant_retrieved
                    );
                }
                let _ = writeln!(s);
            }
            let _ = writeln!(s, "{:<8}  {:>9}  {:>9}  {:>9}", "Stemmer", "Precision", "Recall", "Silence");
            for run in runs {
                let a = &run.average;
                let _ = writeln!(
                    s,
                    "{:<8}  {:>9.4}  {:>9.4}  {:>9.4}",
                    run.stemmer, a.precision, a.recall, a.silence
                );
            }
            let _ = writeln!(s);
            let _ = write!(s, "{:<8}", "Recall");
            for run in runs {
                let _ = write!(s, "  {:>8}", run.stemmer);
            }
            let _ = writeln!(s);
            for level in 0..RECALL_LEVELS {
                let _ = write!(s, "{:<8.1}", level as f64 / 10.0);
                for run in runs {
                    let _ = write!(s, "  {:>8.4}", run.eleven_point[level]);
                }
                let _ = writeln!(s);
            }
            if let Some(acc) = accuracy {
                let _ = writeln!(s);
                let _ = writeln!(
                    s,
                    "accuracy  {}/{} = {:.4}",
                    acc.overall.correct, acc.overall.total_valid, acc.overall.accuracy
                );
                for d in &acc.documents {
                    let _ = writeln!(
                        s,
                        "  {}  {}/{} = {:.4}",
                        d.doc_id, d.accuracy.correct, d.accuracy.total_valid, d.accuracy.accuracy
                    );
                }
            }
            out.write_all(s.as_bytes())?;
        }
    }
    Ok(())
}
