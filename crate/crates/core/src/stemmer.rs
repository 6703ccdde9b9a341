//! Template matching and root extraction.
//!
//! A template matches base2 when both have the same number of letters and
//! every augment position of the template carries the same letter in base2.
//! The root is base2 with the augment letters deleted.
//!
//! [`stem`] scores every (segmentation, template) pair and keeps the best one
//! under this priority:
//!
//! 1. the root is in the root dictionary,
//! 2. the root has three letters,
//! 3. the segmentation comes earlier (longer clitics and affixes first),
//! 4. the template comes earlier in the template file.
//!
//! Specific words (proper nouns and the like) short-circuit the search: the
//! first segmentation whose base2 is a specific word is returned unanalyzed.
//! Words with no matching template fall back to the base2 of their first
//! segmentation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, Template};
use crate::segment::{enumerate_segmentations, Segmentation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemResult {
    pub surface: String,
    pub root: String,
    pub template: Option<Template>,
    pub segmentation: Segmentation,
    /// Root found in the root dictionary.
    pub validated: bool,
    /// No template was applied; `root` is the segmentation's base2.
    pub fallback: bool,
    /// base2 was listed as a specific word.
    pub specific: bool,
}

/// Flat view of a [`StemResult`] for output.
#[derive(Debug, Clone, Serialize)]
pub struct StemRecord<'a> {
    pub word: &'a str,
    pub proclitic: &'a str,
    pub prefix: &'a str,
    pub base: &'a str,
    pub suffix: &'a str,
    pub enclitic: &'a str,
    pub template: Option<&'a str>,
    pub infix_positions: Option<String>,
    pub root: &'a str,
    pub validated: bool,
    pub fallback: bool,
}

impl StemResult {
    pub fn record(&self) -> StemRecord<'_> {
        let seg = &self.segmentation;
        StemRecord {
            word: &self.surface,
            proclitic: &seg.proclitic,
            prefix: &seg.prefix,
            base: &seg.base2,
            suffix: &seg.suffix,
            enclitic: &seg.enclitic,
            template: self.template.as_ref().map(Template::pattern),
            infix_positions: self.template.as_ref().map(Template::positions_code),
            root: &self.root,
            validated: self.validated,
            fallback: self.fallback,
        }
    }
}

fn matches(letters: &[char], template: &Template) -> bool {
    letters.len() == template.len()
        && template
            .infix_positions()
            .iter()
            .all(|&p| letters[p - 1] == template.letters()[p - 1])
}

/// Templates of base2's length whose augment letters sit at the same
/// positions in base2, in file order.
pub fn match_template<'a>(base2: &str, lex: &'a Lexicon) -> Vec<&'a Template> {
    let letters: Vec<char> = base2.chars().collect();
    lex.templates_of_length(letters.len())
        .iter()
        .filter(|t| matches(&letters, t))
        .collect()
}

pub fn extract_root(base2: &str, template: &Template) -> Result<String> {
    let letters: Vec<char> = base2.chars().collect();
    if letters.len() != template.len() {
        return Err(Error::LengthMismatch {
            word: base2.to_string(),
            word_len: letters.len(),
            pattern: template.pattern().to_string(),
            pattern_len: template.len(),
        });
    }
    if !matches(&letters, template) {
        return Err(Error::InfixMismatch {
            word: base2.to_string(),
            pattern: template.pattern().to_string(),
        });
    }
    let infix = template.infix_positions();
    Ok(letters
        .iter()
        .enumerate()
        .filter(|(i, _)| infix.binary_search(&(i + 1)).is_err())
        .map(|(_, &c)| c)
        .collect())
}

pub fn stem(word: &str, lex: &Lexicon) -> Result<StemResult> {
    let segmentations = enumerate_segmentations(word, lex)?;

    if let Some(seg) = segmentations
        .iter()
        .find(|s| lex.is_specific_word(&s.base2))
    {
        return Ok(StemResult {
            surface: word.to_string(),
            root: seg.base2.clone(),
            template: None,
            segmentation: seg.clone(),
            validated: false,
            fallback: true,
            specific: true,
        });
    }

    // (tier, segmentation, template, root); lower tier wins, first seen wins ties
    let mut best: Option<(u8, usize, &Template, String)> = None;
    'search: for (si, seg) in segmentations.iter().enumerate() {
        for template in match_template(&seg.base2, lex) {
            let root = extract_root(&seg.base2, template)?;
            let tier = match (lex.is_root(&root), root.chars().count() == 3) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            };
            if best.as_ref().is_none_or(|b| tier < b.0) {
                best = Some((tier, si, template, root));
                if tier == 0 {
                    break 'search;
                }
            }
        }
    }

    Ok(match best {
        Some((_, si, template, root)) => StemResult {
            surface: word.to_string(),
            validated: lex.is_root(&root),
            root,
            template: Some(template.clone()),
            segmentation: segmentations[si].clone(),
            fallback: false,
            specific: false,
        },
        None => {
            let seg = segmentations
                .into_iter()
                .next()
                .unwrap_or_else(|| Segmentation::trivial(word));
            StemResult {
                surface: word.to_string(),
                root: seg.base2.clone(),
                template: None,
                validated: lex.is_root(&seg.base2),
                segmentation: seg,
                fallback: true,
                specific: false,
            }
        }
    })
}

pub fn stem_equal(a: &str, b: &str, lex: &Lexicon) -> Result<bool> {
    Ok(stem(a, lex)?.root == stem(b, lex)?.root)
}
