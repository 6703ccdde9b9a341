//! Dictionaries used by the analyzer: clitic and affix inventories, their
//! incompatibility tables, templates, roots, stop words and specific words.
//!
//! A lexicon lives in a directory of UTF-8 files, one entry per line, with
//! `#` starting a comment line:
//!
//! | file                  | content                                        |
//! |-----------------------|------------------------------------------------|
//! | `proclitics.txt`      | proclitics                                     |
//! | `enclitics.txt`       | enclitics                                      |
//! | `prefixes.txt`        | prefixes                                       |
//! | `suffixes.txt`        | suffixes                                       |
//! | `incompat_clitic.txt` | proclitic+enclitic strings that are forbidden  |
//! | `incompat_affix.txt`  | prefix+suffix strings that are forbidden       |
//! | `templates.tsv`       | `pattern<TAB>1,3,5` augment-letter positions   |
//! | `roots.txt`           | root dictionary (optional)                     |
//! | `stopwords.txt`       | stop words                                     |
//! | `specific_words.txt`  | words indexed verbatim (optional)              |
//!
//! Entries are normalized on load and the empty string is always a member of
//! the four clitic/affix sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::normalize::{is_arabic_letter, normalize_word};

pub const PROCLITICS_FILE: &str = "proclitics.txt";
pub const ENCLITICS_FILE: &str = "enclitics.txt";
pub const PREFIXES_FILE: &str = "prefixes.txt";
pub const SUFFIXES_FILE: &str = "suffixes.txt";
pub const CLITIC_INCOMPAT_FILE: &str = "incompat_clitic.txt";
pub const AFFIX_INCOMPAT_FILE: &str = "incompat_affix.txt";
pub const TEMPLATES_FILE: &str = "templates.tsv";
pub const ROOTS_FILE: &str = "roots.txt";
pub const STOPWORDS_FILE: &str = "stopwords.txt";
pub const SPECIFIC_WORDS_FILE: &str = "specific_words.txt";

/// A word pattern such as مفاعيل together with the 1-based positions of its
/// augment letters. Deleting those letters from a matching word yields the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Template {
    pattern: String,
    letters: Vec<char>,
    infix_positions: Vec<usize>,
}

impl Template {
    pub fn new(pattern: &str, infix_positions: Vec<usize>) -> Result<Self> {
        let pattern = normalize_word(pattern);
        let invalid = |reason: String| Error::InvalidTemplate {
            pattern: pattern.clone(),
            reason,
        };
        let letters: Vec<char> = pattern.chars().collect();
        if letters.is_empty() || !letters.iter().all(|&c| is_arabic_letter(c)) {
            return Err(invalid("pattern must be a non-empty run of Arabic letters".into()));
        }
        if let Some(&p) = infix_positions.iter().find(|&&p| p == 0 || p > letters.len()) {
            return Err(invalid(format!("position {p} outside 1..={}", letters.len())));
        }
        if infix_positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("positions must be strictly increasing".into()));
        }
        if letters.len() < infix_positions.len() + 2 {
            return Err(invalid("fewer than two root letters remain".into()));
        }
        Ok(Template {
            pattern,
            letters,
            infix_positions,
        })
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn infix_positions(&self) -> &[usize] {
        &self.infix_positions
    }

    /// Number of letters in the pattern.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Length of the root this template leaves behind.
    pub fn root_len(&self) -> usize {
        self.letters.len() - self.infix_positions.len()
    }

    /// Positions rendered as in `templates.tsv`, e.g. `1,3,5`.
    pub fn positions_code(&self) -> String {
        let mut s = String::new();
        for (i, p) in self.infix_positions.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{p}");
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncompatKind {
    Clitic,
    Affix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    proclitics: BTreeSet<String>,
    enclitics: BTreeSet<String>,
    prefixes: BTreeSet<String>,
    suffixes: BTreeSet<String>,
    clitic_incompat: BTreeSet<String>,
    affix_incompat: BTreeSet<String>,
    templates: BTreeMap<usize, Vec<Template>>,
    template_order: Vec<(usize, usize)>,
    roots: BTreeSet<String>,
    stop_words: BTreeSet<String>,
    specific_words: BTreeSet<String>,
}

/// Locations of the lexicon files. [`LexiconPaths::in_dir`] gives the
/// standard layout.
#[derive(Debug, Clone)]
pub struct LexiconPaths {
    pub proclitics: PathBuf,
    pub enclitics: PathBuf,
    pub prefixes: PathBuf,
    pub suffixes: PathBuf,
    pub clitic_incompat: PathBuf,
    pub affix_incompat: PathBuf,
    pub templates: PathBuf,
    pub roots: PathBuf,
    pub stop_words: PathBuf,
    pub specific_words: PathBuf,
}

impl LexiconPaths {
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        LexiconPaths {
            proclitics: dir.join(PROCLITICS_FILE),
            enclitics: dir.join(ENCLITICS_FILE),
            prefixes: dir.join(PREFIXES_FILE),
            suffixes: dir.join(SUFFIXES_FILE),
            clitic_incompat: dir.join(CLITIC_INCOMPAT_FILE),
            affix_incompat: dir.join(AFFIX_INCOMPAT_FILE),
            templates: dir.join(TEMPLATES_FILE),
            roots: dir.join(ROOTS_FILE),
            stop_words: dir.join(STOPWORDS_FILE),
            specific_words: dir.join(SPECIFIC_WORDS_FILE),
        }
    }
}

fn read_required(path: &Path) -> Result<String> {
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    Ok(fs::read_to_string(path)?)
}

fn read_optional(path: &Path) -> Result<String> {
    if path.is_file() {
        Ok(fs::read_to_string(path)?)
    } else {
        Ok(String::new())
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn entry_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn parse_word_list(name: &str, text: &str) -> Result<Vec<String>> {
    entry_lines(text)
        .map(|(line, raw)| {
            let word = normalize_word(raw.trim());
            if word.chars().all(is_arabic_letter) {
                Ok(word)
            } else {
                Err(Error::MalformedLine {
                    file: name.to_string(),
                    line,
                    reason: format!("{:?} is not a single Arabic word", raw.trim()),
                })
            }
        })
        .collect()
}

fn parse_templates(name: &str, text: &str) -> Result<Vec<Template>> {
    let malformed = |line: usize, reason: String| Error::MalformedLine {
        file: name.to_string(),
        line,
        reason,
    };
    entry_lines(text)
        .map(|(line, raw)| {
            let (pattern, code) = raw
                .split_once('\t')
                .ok_or_else(|| malformed(line, "expected pattern<TAB>positions".into()))?;
            let positions = code
                .split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| malformed(line, format!("bad position {p:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Template::new(pattern.trim(), positions).map_err(|e| malformed(line, e.to_string()))
        })
        .collect()
}

/// Builds a [`Lexicon`] from in-memory lists. Entries are normalized and
/// templates are checked for conflicting duplicates.
#[derive(Debug, Default, Clone)]
pub struct LexiconBuilder {
    proclitics: Vec<String>,
    enclitics: Vec<String>,
    prefixes: Vec<String>,
    suffixes: Vec<String>,
    clitic_incompat: Vec<String>,
    affix_incompat: Vec<String>,
    templates: Vec<Template>,
    roots: Vec<String>,
    stop_words: Vec<String>,
    specific_words: Vec<String>,
}

fn extend<I, S>(dst: &mut Vec<String>, items: I)
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    dst.extend(items.into_iter().map(|s| s.as_ref().to_string()));
}

impl LexiconBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn proclitics<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, items: I) -> Self {
        extend(&mut self.proclitics, items);
        self
    }

    pub fn enclitics<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, items: I) -> Self {
        extend(&mut self.enclitics, items);
        self
    }

    pub fn prefixes<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, items: I) -> Self {
        extend(&mut self.prefixes, items);
        self
    }

    pub fn suffixes<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, items: I) -> Self {
        extend(&mut self.suffixes, items);
        self
    }

    pub fn clitic_incompat<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, items: I) -> Self {
        extend(&mut self.clitic_incompat, items);
        self
    }

    pub fn affix_incompat<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, items: I) -> Self {
        extend(&mut self.affix_incompat, items);
        self
    }

    pub fn roots<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, items: I) -> Self {
        extend(&mut self.roots, items);
        self
    }

    pub fn stop_words<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, items: I) -> Self {
        extend(&mut self.stop_words, items);
        self
    }

    pub fn specific_words<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, items: I) -> Self {
        extend(&mut self.specific_words, items);
        self
    }

    pub fn template(mut self, template: Template) -> Self {
        self.templates.push(template);
        self
    }

    pub fn templates<I: IntoIterator<Item = Template>>(mut self, items: I) -> Self {
        self.templates.extend(items);
        self
    }

    pub fn build(self) -> Result<Lexicon> {
        fn set(items: Vec<String>, with_empty: bool) -> BTreeSet<String> {
            let mut s: BTreeSet<String> = items
                .iter()
                .map(|w| normalize_word(w))
                .filter(|w| !w.is_empty())
                .collect();
            if with_empty {
                s.insert(String::new());
            }
            s
        }

        let mut templates: BTreeMap<usize, Vec<Template>> = BTreeMap::new();
        let mut seen: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut template_order = Vec::new();
        for t in self.templates {
            match seen.get(t.pattern()) {
                Some(prev) if prev.as_slice() == t.infix_positions() => continue,
                Some(_) => {
                    return Err(Error::DuplicateTemplate {
                        pattern: t.pattern().to_string(),
                    })
                }
                None => {}
            }
            seen.insert(t.pattern().to_string(), t.infix_positions().to_vec());
            let bucket = templates.entry(t.len()).or_default();
            template_order.push((t.len(), bucket.len()));
            bucket.push(t);
        }

        Ok(Lexicon {
            proclitics: set(self.proclitics, true),
            enclitics: set(self.enclitics, true),
            prefixes: set(self.prefixes, true),
            suffixes: set(self.suffixes, true),
            clitic_incompat: set(self.clitic_incompat, false),
            affix_incompat: set(self.affix_incompat, false),
            templates,
            template_order,
            roots: set(self.roots, false),
            stop_words: set(self.stop_words, false),
            specific_words: set(self.specific_words, false),
        })
    }
}

macro_rules! seed_file {
    ($name:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/lexicon/", $name))
    };
}

impl Lexicon {
    pub fn builder() -> LexiconBuilder {
        LexiconBuilder::new()
    }

    /// Load a lexicon from its files. `roots.txt` and `specific_words.txt`
    /// may be absent; every other file is required.
    pub fn load(paths: &LexiconPaths) -> Result<Self> {
        let list = |path: &Path, required: bool| -> Result<Vec<String>> {
            let text = if required {
                read_required(path)?
            } else {
                read_optional(path)?
            };
            parse_word_list(&path.display().to_string(), &text)
        };
        let templates = parse_templates(
            &paths.templates.display().to_string(),
            &read_required(&paths.templates)?,
        )?;
        Lexicon::builder()
            .proclitics(list(&paths.proclitics, true)?)
            .enclitics(list(&paths.enclitics, true)?)
            .prefixes(list(&paths.prefixes, true)?)
            .suffixes(list(&paths.suffixes, true)?)
            .clitic_incompat(list(&paths.clitic_incompat, true)?)
            .affix_incompat(list(&paths.affix_incompat, true)?)
            .templates(templates)
            .roots(list(&paths.roots, false)?)
            .stop_words(list(&paths.stop_words, true)?)
            .specific_words(list(&paths.specific_words, false)?)
            .build()
    }

    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        Self::load(&LexiconPaths::in_dir(dir))
    }

    /// The lexicon shipped with the crate, compiled into the binary.
    pub fn seed() -> Self {
        fn list(name: &str, text: &str) -> Vec<String> {
            parse_word_list(name, text).expect("seed lexicon is well formed")
        }
        Lexicon::builder()
            .proclitics(list(PROCLITICS_FILE, seed_file!("proclitics.txt")))
            .enclitics(list(ENCLITICS_FILE, seed_file!("enclitics.txt")))
            .prefixes(list(PREFIXES_FILE, seed_file!("prefixes.txt")))
            .suffixes(list(SUFFIXES_FILE, seed_file!("suffixes.txt")))
            .clitic_incompat(list(CLITIC_INCOMPAT_FILE, seed_file!("incompat_clitic.txt")))
            .affix_incompat(list(AFFIX_INCOMPAT_FILE, seed_file!("incompat_affix.txt")))
            .templates(
                parse_templates(TEMPLATES_FILE, seed_file!("templates.tsv"))
                    .expect("seed templates are well formed"),
            )
            .roots(list(ROOTS_FILE, seed_file!("roots.txt")))
            .stop_words(list(STOPWORDS_FILE, seed_file!("stopwords.txt")))
            .specific_words(list(SPECIFIC_WORDS_FILE, seed_file!("specific_words.txt")))
            .build()
            .expect("seed lexicon is consistent")
    }

    /// Write every dictionary to `dir` in the layout [`Lexicon::load_dir`] reads.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let write_set = |name: &str, set: &BTreeSet<String>| -> Result<()> {
            let mut out = String::new();
            for w in set.iter().filter(|w| !w.is_empty()) {
                out.push_str(w);
                out.push('\n');
            }
            fs::write(dir.join(name), out)?;
            Ok(())
        };
        write_set(PROCLITICS_FILE, &self.proclitics)?;
        write_set(ENCLITICS_FILE, &self.enclitics)?;
        write_set(PREFIXES_FILE, &self.prefixes)?;
        write_set(SUFFIXES_FILE, &self.suffixes)?;
        write_set(CLITIC_INCOMPAT_FILE, &self.clitic_incompat)?;
        write_set(AFFIX_INCOMPAT_FILE, &self.affix_incompat)?;
        write_set(ROOTS_FILE, &self.roots)?;
        write_set(STOPWORDS_FILE, &self.stop_words)?;
        write_set(SPECIFIC_WORDS_FILE, &self.specific_words)?;

        let mut out = String::new();
        for t in self.templates() {
            let _ = writeln!(out, "{}\t{}", t.pattern(), t.positions_code());
        }
        fs::write(dir.join(TEMPLATES_FILE), out)?;
        Ok(())
    }

    pub fn proclitics(&self) -> &BTreeSet<String> {
        &self.proclitics
    }

    pub fn enclitics(&self) -> &BTreeSet<String> {
        &self.enclitics
    }

    pub fn prefixes(&self) -> &BTreeSet<String> {
        &self.prefixes
    }

    pub fn suffixes(&self) -> &BTreeSet<String> {
        &self.suffixes
    }

    pub fn incompat(&self, kind: IncompatKind) -> &BTreeSet<String> {
        match kind {
            IncompatKind::Clitic => &self.clitic_incompat,
            IncompatKind::Affix => &self.affix_incompat,
        }
    }

    pub fn roots(&self) -> &BTreeSet<String> {
        &self.roots
    }

    pub fn stop_words(&self) -> &BTreeSet<String> {
        &self.stop_words
    }

    pub fn specific_words(&self) -> &BTreeSet<String> {
        &self.specific_words
    }

    pub fn is_stop_word(&self, word: &str) -> bool {
        self.stop_words.contains(word)
    }

    pub fn is_root(&self, root: &str) -> bool {
        self.roots.contains(root)
    }

    pub fn is_specific_word(&self, word: &str) -> bool {
        self.specific_words.contains(word)
    }

    /// Tests exactly `left + right` against the table for `kind`.
    pub fn is_incompatible(&self, kind: IncompatKind, left: &str, right: &str) -> bool {
        let table = self.incompat(kind);
        if table.is_empty() {
            return false;
        }
        let mut joined = String::with_capacity(left.len() + right.len());
        joined.push_str(left);
        joined.push_str(right);
        table.contains(&joined)
    }

    /// Templates whose pattern has exactly `n` letters, in file order.
    pub fn templates_of_length(&self, n: usize) -> &[Template] {
        self.templates.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All templates in file order.
    pub fn templates(&self) -> impl Iterator<Item = &Template> + '_ {
        self.template_order
            .iter()
            .map(move |&(len, i)| &self.templates[&len][i])
    }
}
