use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lexicon file not found: {0}")]
    MissingFile(PathBuf),

    #[error("{file}:{line}: {reason}")]
    MalformedLine {
        file: String,
        line: usize,
        reason: String,
    },

    #[error("template {pattern} declared twice with different infix positions")]
    DuplicateTemplate { pattern: String },

    #[error("invalid template {pattern}: {reason}")]
    InvalidTemplate { pattern: String, reason: String },

    #[error("empty word")]
    EmptyWord,

    #[error("word {word} has {word_len} letters but template {pattern} has {pattern_len}")]
    LengthMismatch {
        word: String,
        word_len: usize,
        pattern: String,
        pattern_len: usize,
    },

    #[error("word {word} does not carry the augment letters of template {pattern}")]
    InfixMismatch { word: String, pattern: String },

    #[error("duplicate document id {0}")]
    DuplicateDocId(String),

    #[error("invalid document id {0:?}: tabs, newlines and commas are not allowed")]
    InvalidDocId(String),

    #[error("unknown document {0}")]
    UnknownDoc(String),

    #[error("query has no indexable words")]
    EmptyQuery,

    #[error("relevant document set is empty")]
    EmptyRelevantSet,

    #[error("no gold root for {0}")]
    MissingGold(String),

    #[error("cannot average an empty list")]
    EmptyList,

    #[error("index line {line}: {reason}")]
    IndexFormat { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
