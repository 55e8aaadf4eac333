//! Tokenization and token cleaning.
//!
//! Raw text is split into unigram tokens, then each token is either
//! normalized to a lowercase alphabetic word or filtered out entirely.
//! Numbers, symbols, hyphenated compounds, possessives/contractions, and
//! tokens with non-ASCII bytes (unless whitelisted) are all dropped whole;
//! filtering is never an error.

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::Path;

/// A document plus the label it is reported under.
#[derive(Clone, Debug)]
pub struct RawText {
    pub content: String,
    pub source_id: String,
}

impl RawText {
    pub fn new(content: impl Into<String>, source_id: impl Into<String>) -> Self {
        RawText {
            content: content.into(),
            source_id: source_id.into(),
        }
    }

    /// Load a UTF-8 text file; invalid UTF-8 is rejected, not repaired.
    pub fn load(path: &Path) -> Result<RawText> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let content = String::from_utf8(bytes).map_err(|_| Error::NotUtf8 { path: path.into() })?;
        Ok(RawText {
            content,
            source_id: path.display().to_string(),
        })
    }
}

/// One surface token as it appeared in the document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// 0-based index in the token stream.
    pub position: usize,
    /// First token of the document, or first token after `.` `!` `?`
    /// followed by whitespace.
    pub sentence_initial: bool,
}

/// Split text into maximal word-character runs. A `-` or `'` stays inside a
/// token only when flanked by alphanumerics on both sides, so `don't` and
/// `state-of-the-art` survive as single tokens while `--` dashes and quote
/// marks split.
pub fn tokenize(text: &RawText) -> Vec<Token> {
    let chars: Vec<char> = text.content.chars().collect();
    let mut tokens = Vec::new();
    let mut sentence_initial = true;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_alphanumeric() {
            let start = i;
            let mut end = i + 1;
            while end < chars.len() {
                let c = chars[end];
                if c.is_alphanumeric() {
                    end += 1;
                } else if (c == '-' || c == '\'')
                    && end + 1 < chars.len()
                    && chars[end + 1].is_alphanumeric()
                {
                    end += 2;
                } else {
                    break;
                }
            }
            tokens.push(Token {
                surface: chars[start..end].iter().collect(),
                position: tokens.len(),
                sentence_initial,
            });
            sentence_initial = false;
            i = end;
        } else {
            if matches!(c, '.' | '!' | '?') {
                let next = chars.get(i + 1);
                if next.map_or(true, |n| n.is_whitespace()) {
                    sentence_initial = true;
                }
            }
            i += 1;
        }
    }
    tokens
}

/// Options governing which surfaces normalize to words.
#[derive(Clone, Debug, Default)]
pub struct NormOptions {
    /// Lowercase non-ASCII Latin letters to accept in addition to a-z.
    pub extra_letters: BTreeSet<char>,
    /// Split hyphenated compounds into their parts instead of dropping them.
    pub split_hyphens: bool,
}

impl NormOptions {
    pub fn from_config(config: &PipelineConfig) -> Self {
        NormOptions {
            extra_letters: config.extra_letters.chars().flat_map(|c| c.to_lowercase()).collect(),
            split_hyphens: config.split_hyphens,
        }
    }

    fn letter_ok(&self, c: char) -> bool {
        c.is_ascii_alphabetic() || c.to_lowercase().all(|l| self.extra_letters.contains(&l))
    }
}

/// Normalize a single surface to its lowercase form, or `None` when the
/// surface is filtered (digits, symbols, hyphens, apostrophes, unlisted
/// non-ASCII letters).
pub fn clean(surface: &str, opts: &NormOptions) -> Option<String> {
    if surface.is_empty() {
        return None;
    }
    if !surface.chars().all(|c| opts.letter_ok(c)) {
        return None;
    }
    Some(surface.to_lowercase())
}

/// Normalize a surface to zero or more words. With `split_hyphens` enabled a
/// compound contributes each alphabetic part; otherwise this is `clean` as an
/// at-most-one-element vector.
pub fn clean_parts(surface: &str, opts: &NormOptions) -> Vec<String> {
    if opts.split_hyphens && surface.contains('-') {
        surface.split('-').filter_map(|p| clean(p, opts)).collect()
    } else {
        clean(surface, opts).into_iter().collect()
    }
}

/// A token that survived cleaning, with the casing evidence the proper-noun
/// heuristic needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanedToken {
    pub word: String,
    pub capitalized: bool,
    pub sentence_initial: bool,
}

/// Clean a token stream, dropping filtered tokens. With `split_hyphens` a
/// compound contributes one cleaned token per alphabetic part.
pub fn clean_stream(tokens: &[Token], opts: &NormOptions) -> Vec<CleanedToken> {
    let mut out = Vec::with_capacity(tokens.len());
    for t in tokens {
        if opts.split_hyphens && t.surface.contains('-') {
            for part in t.surface.split('-') {
                if let Some(word) = clean(part, opts) {
                    out.push(CleanedToken {
                        word,
                        capitalized: part.chars().next().is_some_and(char::is_uppercase),
                        sentence_initial: t.sentence_initial,
                    });
                }
            }
        } else if let Some(word) = clean(&t.surface, opts) {
            out.push(CleanedToken {
                word,
                capitalized: t.surface.chars().next().is_some_and(char::is_uppercase),
                sentence_initial: t.sentence_initial,
            });
        }
    }
    out
}

const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");
pub const BUNDLED_STOPWORDS_VERSION: &str = "en-175-1.0";

/// A pinned set of function words to optionally exclude from counting.
#[derive(Clone, Debug)]
pub struct StopwordSet {
    words: HashSet<String>,
    pub version: String,
}

impl StopwordSet {
    pub fn empty() -> Self {
        StopwordSet {
            words: HashSet::new(),
            version: "empty".into(),
        }
    }

    /// The versioned list shipped with the tool.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_STOPWORDS, BUNDLED_STOPWORDS_VERSION)
    }

    /// One word per line; `#` comment lines and blank lines are ignored.
    pub fn parse(data: &str, version: &str) -> Self {
        let words = data
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_lowercase())
            .collect();
        StopwordSet {
            words,
            version: version.into(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let data = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&data, &path.display().to_string()))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Drop stop words from a normalized word sequence, preserving order.
pub fn remove_stopwords(words: Vec<String>, stops: &StopwordSet) -> Vec<String> {
    words.into_iter().filter(|w| !stops.contains(w)).collect()
}
