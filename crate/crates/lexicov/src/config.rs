//! User-facing pipeline configuration.
//!
//! Every toggle that changes what ends up in a word list lives here, and a
//! snapshot of it travels with every table, list, and report so any output
//! can be reproduced from its own metadata.

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// When lemmatization runs relative to counting and the coverage cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaOrder {
    /// Lemmatize the token stream, then count and cut. The default.
    BeforeCount,
    /// Count and cut on surface forms, then lemmatize the survivors and
    /// deduplicate.
    AfterCutoff,
}

impl LemmaOrder {
    pub fn as_str(&self) -> &'static str {
        match self {
            LemmaOrder::BeforeCount => "before_count",
            LemmaOrder::AfterCutoff => "after_cutoff",
        }
    }

    pub fn parse(s: &str) -> Option<LemmaOrder> {
        match s {
            "before_count" | "before-count" => Some(LemmaOrder::BeforeCount),
            "after_cutoff" | "after-cutoff" => Some(LemmaOrder::AfterCutoff),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Target cumulative coverage for the cutoff, in (0, 1].
    pub threshold: Fraction,
    pub lemmatize: bool,
    pub remove_stopwords: bool,
    /// Retain detected proper nouns (exempt from lemmatization) instead of
    /// dropping them.
    pub keep_proper_nouns: bool,
    /// Optional hard cap on list size; truncation is recorded, never an error.
    pub max_size: Option<usize>,
    pub lemma_order: LemmaOrder,
    /// Headwords to subtract from the final list.
    pub exclude_list: Option<Vec<String>>,
    /// Split hyphenated compounds into parts instead of dropping them whole.
    pub split_hyphens: bool,
    /// Extra Latin letters accepted by the token filter beyond ASCII a-z.
    pub extra_letters: String,
    /// Capitalization-ratio threshold for the proper-noun heuristic.
    pub proper_threshold: f64,
    /// Minimum occurrences before a word can be judged a proper noun.
    pub proper_min_count: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            threshold: Fraction::new(95, 100),
            lemmatize: true,
            remove_stopwords: false,
            keep_proper_nouns: true,
            max_size: None,
            lemma_order: LemmaOrder::BeforeCount,
            exclude_list: None,
            split_hyphens: false,
            extra_letters: String::new(),
            proper_threshold: 0.9,
            proper_min_count: 3,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.threshold.is_zero() || self.threshold > Fraction::ONE {
            return Err(Error::InvalidThreshold(self.threshold.to_string()));
        }
        if self.max_size == Some(0) {
            return Err(Error::InvalidThreshold("max_size must be >= 1".into()));
        }
        Ok(())
    }

    /// Flat key=value view used in word list headers and report metadata.
    pub fn snapshot(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("threshold".into(), format!("{}", self.threshold));
        m.insert("lemmatize".into(), self.lemmatize.to_string());
        m.insert("remove_stopwords".into(), self.remove_stopwords.to_string());
        m.insert("keep_proper_nouns".into(), self.keep_proper_nouns.to_string());
        if let Some(n) = self.max_size {
            m.insert("max_size".into(), n.to_string());
        }
        m.insert("lemma_order".into(), self.lemma_order.as_str().into());
        m.insert("split_hyphens".into(), self.split_hyphens.to_string());
        if !self.extra_letters.is_empty() {
            m.insert("extra_letters".into(), self.extra_letters.clone());
        }
        m.insert("proper_threshold".into(), format!("{}", self.proper_threshold));
        m.insert("proper_min_count".into(), self.proper_min_count.to_string());
        m
    }
}
