//! Dictionary-plus-rules English lemmatization and the proper-noun guard.
//!
//! Lookup is POS-free: each surface form maps to the lemma of its most
//! frequent reading, so `rose` lemmatizes to `rise` even when it is the
//! flower. The capitalization heuristic exists exactly for that case: a word
//! that is consistently capitalized mid-sentence is judged a proper noun and
//! can be kept verbatim instead of being folded into the wrong lemma.

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::textnorm::CleanedToken;
use std::collections::HashMap;
use std::fs;
use std::path::Path;

const BUNDLED_LEMMAS: &str = include_str!("../data/lemmas_en.tsv");
pub const BUNDLED_LEMMAS_VERSION: &str = "en-lemma-1.0";

/// Surface form to lemma map. Every value is a fixpoint: it either has no
/// entry of its own or maps to itself.
#[derive(Clone, Debug)]
pub struct LemmaDictionary {
    entries: HashMap<String, String>,
    pub version: String,
}

impl LemmaDictionary {
    pub fn empty() -> Self {
        LemmaDictionary {
            entries: HashMap::new(),
            version: "empty".into(),
        }
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEMMAS, BUNDLED_LEMMAS_VERSION)
            .expect("bundled lemma dictionary must be valid")
    }

    /// Parse `surface<TAB>lemma` lines; `#` comments and blanks are ignored.
    pub fn parse(data: &str, version: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (lineno, line) in data.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (surface, lemma) = line.split_once('\t').ok_or_else(|| {
                Error::InvalidLemmaDictionary(format!("line {}: missing TAB", lineno + 1))
            })?;
            let (surface, lemma) = (surface.trim().to_lowercase(), lemma.trim().to_lowercase());
            if surface.is_empty() || lemma.is_empty() {
                return Err(Error::InvalidLemmaDictionary(format!(
                    "line {}: empty field",
                    lineno + 1
                )));
            }
            entries.insert(surface, lemma);
        }
        let dict = LemmaDictionary {
            entries,
            version: version.into(),
        };
        for lemma in dict.entries.values() {
            if let Some(mapped) = dict.entries.get(lemma) {
                if mapped != lemma {
                    return Err(Error::InvalidLemmaDictionary(format!(
                        "lemma `{lemma}` is not a fixpoint: it maps to `{mapped}`"
                    )));
                }
            }
        }
        Ok(dict)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let data = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&data, &path.display().to_string())
    }

    pub fn get(&self, word: &str) -> Option<&str> {
        self.entries.get(word).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Letters never undoubled when a doubled consonant precedes -ed/-ing
/// (fall -> falling, miss -> missing, buzz -> buzzing, stuff -> stuffing).
const KEEP_DOUBLED: &[char] = &['a', 'e', 'i', 'o', 'u', 'l', 's', 'z', 'f'];

fn undouble(stem: &str) -> Option<String> {
    let mut chars = stem.chars().rev();
    let last = chars.next()?;
    let prev = chars.next()?;
    if last == prev && last.is_ascii_alphabetic() && !KEEP_DOUBLED.contains(&last) {
        Some(stem[..stem.len() - last.len_utf8()].to_string())
    } else {
        None
    }
}

fn long_enough(stem: &str) -> bool {
    stem.chars().count() >= 3
}

/// One application of the ordered suffix rules, longest suffix first.
/// Returns `None` when no rule fires.
fn apply_suffix_rule(word: &str) -> Option<String> {
    if let Some(stem) = word.strip_suffix("ies") {
        let out = format!("{stem}y");
        if long_enough(&out) {
            return Some(out);
        }
    }
    if let Some(stem) = word.strip_suffix("ied") {
        let out = format!("{stem}y");
        if long_enough(&out) {
            return Some(out);
        }
    }
    if let Some(stem) = word.strip_suffix("ing") {
        let out = undouble(stem).unwrap_or_else(|| stem.to_string());
        if long_enough(&out) {
            return Some(out);
        }
    }
    if let Some(stem) = word.strip_suffix("es") {
        if ["s", "x", "z", "ch", "sh"].iter().any(|s| stem.ends_with(s)) && long_enough(stem) {
            return Some(stem.to_string());
        }
    }
    if let Some(stem) = word.strip_suffix("ed") {
        let out = undouble(stem).unwrap_or_else(|| stem.to_string());
        if long_enough(&out) {
            return Some(out);
        }
    }
    if let Some(stem) = word.strip_suffix('s') {
        if !word.ends_with("ss") && long_enough(stem) {
            return Some(stem.to_string());
        }
    }
    None
}

/// Map a normalized word to its headword: dictionary lookup first, then the
/// suffix rules cascade until neither applies. The result is a fixpoint of
/// this function.
pub fn lemmatize(word: &str, dict: &LemmaDictionary) -> String {
    let mut current = word.to_string();
    loop {
        if let Some(lemma) = dict.get(&current) {
            return lemma.to_string();
        }
        match apply_suffix_rule(&current) {
            Some(next) => current = next,
            None => return current,
        }
    }
}

/// Capitalization evidence for one word.
#[derive(Clone, Debug, PartialEq)]
pub struct ProperNounVerdict {
    pub word: String,
    pub is_proper: bool,
    /// Capitalized non-sentence-initial occurrences over total occurrences.
    pub evidence: Fraction,
    pub occurrences: u64,
}

/// Thresholds for the proper-noun heuristic.
#[derive(Clone, Copy, Debug)]
pub struct ProperNounOptions {
    pub threshold: f64,
    pub min_count: u64,
}

impl Default for ProperNounOptions {
    fn default() -> Self {
        ProperNounOptions {
            threshold: 0.9,
            min_count: 3,
        }
    }
}

/// Judge every distinct word in a cleaned stream by how often it appears
/// capitalized outside sentence-initial position.
pub fn detect_proper_nouns(
    stream: &[CleanedToken],
    opts: ProperNounOptions,
) -> HashMap<String, ProperNounVerdict> {
    let mut tallies: HashMap<&str, (u64, u64)> = HashMap::new();
    for t in stream {
        let e = tallies.entry(t.word.as_str()).or_default();
        e.0 += 1;
        if t.capitalized && !t.sentence_initial {
            e.1 += 1;
        }
    }
    tallies
        .into_iter()
        .map(|(word, (total, cap_mid))| {
            let evidence = Fraction::new(cap_mid, total);
            let is_proper = total >= opts.min_count && evidence.to_f64() >= opts.threshold;
            (
                word.to_string(),
                ProperNounVerdict {
                    word: word.to_string(),
                    is_proper,
                    evidence,
                    occurrences: total,
                },
            )
        })
        .collect()
}

/// Resolve each word against the verdicts: proper nouns are either kept
/// verbatim (exempt from lemmatization) or removed before counting;
/// everything else is lemmatized when a dictionary is supplied.
pub fn apply_proper_noun_policy(
    words: &[String],
    verdicts: &HashMap<String, ProperNounVerdict>,
    keep_proper_nouns: bool,
    dict: Option<&LemmaDictionary>,
) -> Vec<String> {
    let mut out = Vec::with_capacity(words.len());
    for word in words {
        let proper = verdicts.get(word).is_some_and(|v| v.is_proper);
        if proper {
            if keep_proper_nouns {
                out.push(word.clone());
            }
        } else {
            match dict {
                Some(d) => out.push(lemmatize(word, d)),
                None => out.push(word.clone()),
            }
        }
    }
    out
}
