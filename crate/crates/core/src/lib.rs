//! Arabic stemming by clitic/affix segmentation and template matching, with
//! a root-keyed inverted index, query matching and retrieval evaluation.
//!
//! The pipeline for a document or a query is
//! [`normalize_text`] → [`tokenize`] → stop-word filter → [`stem`] → index key.
//!
//! ```
//! use esair::{stem, Lexicon};
//!
//! let lex = Lexicon::seed();
//! let r = stem("مفاتيح", &lex).unwrap();
//! assert_eq!(r.root, "فتح");
//! assert_eq!(r.template.unwrap().pattern(), "مفاعيل");
//! ```

pub mod cli;
pub mod error;
pub mod eval;
pub mod index;
pub mod lexicon;
pub mod normalize;
pub mod retrieval;
pub mod segment;
pub mod stemmer;

pub use error::{Error, Result};
pub use eval::{
    eleven_point_precision, eval_query, macro_average, stem_accuracy, EvalMetrics, Qrels,
    StemAccuracy,
};
pub use index::{
    build_index, build_verbatim_index, reduction_stats, Document, IndexMode, InvertedIndex,
    ReductionStats,
};
pub use lexicon::{IncompatKind, Lexicon, LexiconPaths, Template};
pub use normalize::{normalize_text, tokenize, NormalizedText, Token};
pub use retrieval::{process_query, process_query_verbatim, search, search_verbatim, Query, SearchResult};
pub use segment::{
    enumerate_affix_splits, enumerate_clitic_splits, enumerate_segmentations, AffixSplit,
    CliticSplit, Segmentation,
};
pub use stemmer::{extract_root, match_template, stem, stem_equal, StemResult};
