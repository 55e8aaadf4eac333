//! lexicov: text-specific word lists with guaranteed lexical coverage.
//!
//! The pipeline turns raw text into cleaned unigram headwords, counts them,
//! ranks them, and cuts the ranked list at a target cumulative coverage to
//! produce a Specialized Word List (SWL). The same machinery ingests Google
//! Books n-gram shards for General Service List (GSL) construction, evaluates
//! arbitrary reference lists against texts, and runs Zipf rank-frequency
//! diagnostics.

pub mod config;
pub mod coverage;
pub mod error;
pub mod fraction;
pub mod lemma;
pub mod ngram;
pub mod report;
pub mod textnorm;
pub mod wordlist;
pub mod zipf;

pub use config::{LemmaOrder, PipelineConfig};
pub use coverage::{
    build_frequency_table, build_swl, count_frequencies, cutoff, list_coverage, rank,
    CutoffResult, FrequencyTable, Provenance, RankedEntry, RankedList,
};
pub use error::{Error, Result};
pub use fraction::Fraction;
pub use lemma::{lemmatize, LemmaDictionary};
pub use textnorm::{tokenize, RawText, StopwordSet, Token};
pub use wordlist::{exclude_known, ListKind, WordList};
