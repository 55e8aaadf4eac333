//! Word lists and their on-disk format.
//!
//! A list file is UTF-8, one headword per line, with an optional header block
//! of `# key=value` provenance lines. Reading a file the tool wrote yields an
//! identical list, and writing it again yields identical bytes.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ListKind {
    Swl,
    Gsl,
    Reference,
}

impl ListKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ListKind::Swl => "swl",
            ListKind::Gsl => "gsl",
            ListKind::Reference => "reference",
        }
    }

    pub fn parse(s: &str) -> Option<ListKind> {
        match s {
            "swl" => Some(ListKind::Swl),
            "gsl" => Some(ListKind::Gsl),
            "reference" => Some(ListKind::Reference),
            _ => None,
        }
    }
}

/// An ordered, duplicate-free set of headwords with provenance metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct WordList {
    pub kind: ListKind,
    headwords: Vec<String>,
    members: HashSet<String>,
    /// Provenance key=value pairs, written as the `#` header block.
    pub meta: BTreeMap<String, String>,
}

impl WordList {
    /// Build a list, keeping the first occurrence of any duplicate.
    pub fn new(kind: ListKind, headwords: Vec<String>, meta: BTreeMap<String, String>) -> Self {
        let mut members = HashSet::with_capacity(headwords.len());
        let headwords: Vec<String> = headwords
            .into_iter()
            .filter(|w| members.insert(w.clone()))
            .collect();
        WordList {
            kind,
            headwords,
            members,
            meta,
        }
    }

    pub fn headwords(&self) -> &[String] {
        &self.headwords
    }

    pub fn size(&self) -> usize {
        self.headwords.len()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.members.contains(word)
    }

    /// Identifier used in reports: the `source` meta key when present,
    /// otherwise the kind.
    pub fn id(&self) -> String {
        self.meta
            .get("source")
            .cloned()
            .unwrap_or_else(|| self.kind.as_str().to_string())
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# kind={}", self.kind.as_str()).unwrap();
        for (k, v) in &self.meta {
            writeln!(out, "# {k}={v}").unwrap();
        }
        for w in &self.headwords {
            writeln!(out, "{w}").unwrap();
        }
        out
    }

    pub fn parse(data: &str, default_source: &str) -> Result<WordList> {
        let mut meta = BTreeMap::new();
        let mut kind = ListKind::Reference;
        let mut words = Vec::new();
        for line in data.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if let Some((k, v)) = comment.split_once('=') {
                    let (k, v) = (k.trim(), v.trim());
                    if k == "kind" {
                        kind = ListKind::parse(v).unwrap_or(ListKind::Reference);
                    } else {
                        meta.insert(k.to_string(), v.to_string());
                    }
                }
                continue;
            }
            words.push(line.to_lowercase());
        }
        if !meta.contains_key("source") {
            meta.insert("source".into(), default_source.to_string());
        }
        Ok(WordList::new(kind, words, meta))
    }

    pub fn load(path: &Path) -> Result<WordList> {
        let data = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&data, &path.display().to_string())
    }
}

/// Set difference preserving rank order; the exclusion is recorded in the
/// result's provenance.
pub fn exclude_known(list: &WordList, known: &WordList) -> WordList {
    let headwords: Vec<String> = list
        .headwords
        .iter()
        .filter(|w| !known.contains(w))
        .cloned()
        .collect();
    let mut meta = list.meta.clone();
    let removed = list.size() - headwords.len();
    meta.insert("excluded_against".into(), known.id());
    meta.insert("excluded_words".into(), removed.to_string());
    WordList::new(list.kind, headwords, meta)
}
