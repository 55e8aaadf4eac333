//! Streaming ingestion of Google-Books-Ngram-format unigram shards.
//!
//! Shards are TSV rows `token TAB year TAB match_count TAB volume_count`,
//! plain or gzipped (detected by magic bytes, never by filename). Memory
//! stays proportional to the number of distinct surviving words: rows are
//! folded into a count map as they stream past, and shards processed in
//! parallel merge by exact integer addition, so any worker count produces an
//! identical table.

use crate::config::PipelineConfig;
use crate::coverage::{cutoff, rank, FrequencyTable, Provenance};
use crate::error::{Error, Result};
use crate::lemma::{lemmatize, LemmaDictionary};
use crate::textnorm::{clean, NormOptions};
use crate::wordlist::{ListKind, WordList};
use flate2::read::GzDecoder;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

/// One parsed shard row. The token is kept verbatim; cleaning happens during
/// aggregation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NgramRecord {
    pub token: String,
    pub year: i32,
    pub match_count: u64,
    pub volume_count: u64,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("malformed row: {0}")]
pub struct MalformedRow(String);

const YEAR_MIN: i32 = 1000;
const YEAR_MAX: i32 = 2100;

/// Parse one TSV row. Malformed rows are counted and skipped by the caller,
/// never fatal.
pub fn parse_ngram_row(line: &str) -> std::result::Result<NgramRecord, MalformedRow> {
    let mut fields = line.split('\t');
    let token = fields.next().filter(|t| !t.is_empty());
    let year = fields.next().and_then(|f| f.parse::<i32>().ok());
    let match_count = fields.next().and_then(|f| f.parse::<u64>().ok());
    let volume_count = fields.next().and_then(|f| f.parse::<u64>().ok());
    if fields.next().is_some() {
        return Err(MalformedRow("too many fields".into()));
    }
    match (token, year, match_count, volume_count) {
        (Some(token), Some(year), Some(match_count), Some(volume_count)) => {
            if !(YEAR_MIN..=YEAR_MAX).contains(&year) {
                return Err(MalformedRow(format!("year {year} out of range")));
            }
            Ok(NgramRecord {
                token: token.to_string(),
                year,
                match_count,
                volume_count,
            })
        }
        _ => Err(MalformedRow("expected token\\tyear\\tmatch\\tvolumes".into())),
    }
}

/// Exact accounting of what happened to every input line.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub lines_read: u64,
    pub lines_malformed: u64,
    pub records_year_filtered: u64,
    pub tokens_cleaned_away: u64,
    pub contributing_lines: u64,
    pub distinct_words_out: u64,
    pub bytes_processed: u64,
}

impl IngestStats {
    pub fn merge(&mut self, other: &IngestStats) {
        self.lines_read += other.lines_read;
        self.lines_malformed += other.lines_malformed;
        self.records_year_filtered += other.records_year_filtered;
        self.tokens_cleaned_away += other.tokens_cleaned_away;
        self.contributing_lines += other.contributing_lines;
        self.bytes_processed += other.bytes_processed;
        // distinct_words_out is set after the merge, not additive
    }
}

/// Google's POS-annotated token suffixes (`dog_NOUN`). Rows whose token is
/// only a tag carry no word and are cleaned away.
const POS_TAGS: &[&str] = &[
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "CONJ", "PRT", "X",
];

/// Strip a recognized `_TAG` suffix; `None` when nothing remains.
pub fn strip_pos_tag(token: &str) -> Option<&str> {
    let trimmed = token.strip_suffix('_').unwrap_or(token);
    if let Some((head, tail)) = trimmed.rsplit_once('_') {
        if POS_TAGS.contains(&tail) {
            if head.is_empty() {
                return None;
            }
            return Some(head);
        }
    }
    Some(token)
}

#[derive(Clone, Debug)]
pub struct IngestOptions {
    /// Rows strictly before this year are dropped.
    pub min_year: i32,
    /// Optional post-aggregation floor on per-word totals.
    pub min_count: Option<u64>,
    pub norm: NormOptions,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            min_year: 1800,
            min_count: None,
            norm: NormOptions::default(),
        }
    }
}

/// Fold one shard's lines into a count map. Returns the partial counts and
/// the per-shard accounting.
pub fn aggregate<R: BufRead>(
    reader: R,
    opts: &IngestOptions,
) -> std::io::Result<(BTreeMap<String, u64>, IngestStats)> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut stats = IngestStats::default();
    for line in reader.lines() {
        let line = line?;
        stats.lines_read += 1;
        stats.bytes_processed += line.len() as u64 + 1;
        let record = match parse_ngram_row(&line) {
            Ok(r) => r,
            Err(_) => {
                stats.lines_malformed += 1;
                continue;
            }
        };
        if record.year < opts.min_year {
            stats.records_year_filtered += 1;
            continue;
        }
        let word = strip_pos_tag(&record.token).and_then(|t| clean(t, &opts.norm));
        match word {
            Some(word) => {
                stats.contributing_lines += 1;
                *counts.entry(word).or_insert(0) += record.match_count;
            }
            None => stats.tokens_cleaned_away += 1,
        }
    }
    stats.distinct_words_out = counts.len() as u64;
    Ok((counts, stats))
}

/// Open a shard, sniffing the gzip magic bytes.
pub fn open_shard(path: &Path) -> Result<Box<dyn BufRead + Send>> {
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut magic = [0u8; 2];
    let n = file.read(&mut magic).map_err(|e| Error::io(path, e))?;
    // re-open rather than seek so the gzip reader sees the whole stream
    drop(file);
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    if n == 2 && magic == [0x1f, 0x8b] {
        Ok(Box::new(BufReader::new(GzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Per-shard accounting alongside the shard's path.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShardStats {
    pub shard: PathBuf,
    pub stats: IngestStats,
}

/// Aggregate shards in parallel and merge the partial tables. The merge is
/// per-word integer addition, so the result is independent of worker count
/// and shard order. IO errors are fatal and name the failing shard.
pub fn aggregate_shards(
    paths: &[PathBuf],
    opts: &IngestOptions,
    config: &PipelineConfig,
) -> Result<(FrequencyTable, IngestStats, Vec<ShardStats>)> {
    let partials: Vec<(PathBuf, BTreeMap<String, u64>, IngestStats)> = paths
        .par_iter()
        .map(|path| {
            let reader = open_shard(path)?;
            let (counts, stats) = aggregate(reader, opts).map_err(|e| Error::io(path, e))?;
            Ok((path.clone(), counts, stats))
        })
        .collect::<Result<_>>()?;

    let mut merged: BTreeMap<String, u64> = BTreeMap::new();
    let mut totals = IngestStats::default();
    let mut per_shard = Vec::with_capacity(partials.len());
    for (path, counts, stats) in partials {
        for (word, count) in counts {
            *merged.entry(word).or_insert(0) += count;
        }
        totals.merge(&stats);
        per_shard.push(ShardStats { shard: path, stats });
    }
    if let Some(floor) = opts.min_count {
        merged.retain(|_, c| *c >= floor);
    }
    totals.distinct_words_out = merged.len() as u64;

    let source_id = paths
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(",");
    let table = FrequencyTable::from_counts(
        merged,
        Provenance {
            source_id,
            config: config.clone(),
        },
    )?;
    Ok((table, totals, per_shard))
}

/// Build a General Service List from an aggregated table: merge variant
/// counts into lemmas, rank, then either take the top `max_size` words
/// (default mode) or cut at the coverage threshold.
pub fn build_gsl(
    table: &FrequencyTable,
    config: &PipelineConfig,
    dict: &LemmaDictionary,
) -> Result<WordList> {
    config.validate()?;
    let merged_table;
    let working = if config.lemmatize {
        let mut merged: BTreeMap<String, u64> = BTreeMap::new();
        for (word, count) in table.iter() {
            *merged.entry(lemmatize(word, dict)).or_insert(0) += count;
        }
        merged_table = FrequencyTable::from_counts(merged, table.provenance.clone())?;
        &merged_table
    } else {
        table
    };

    let ranked = rank(working);
    let mut meta = config.snapshot();
    meta.insert("source".into(), working.provenance.source_id.clone());
    meta.insert("dict_version".into(), dict.version.clone());
    let selected: Vec<String> = match config.max_size {
        Some(cap) => {
            let take = cap.min(ranked.entries.len());
            meta.insert(
                "achieved".into(),
                format!("{}", ranked.entries[take - 1].cum_coverage),
            );
            ranked.entries[..take]
                .iter()
                .map(|e| e.headword.clone())
                .collect()
        }
        None => {
            let cut = cutoff(&ranked, config.threshold);
            meta.insert("achieved".into(), format!("{}", cut.achieved));
            ranked.entries[..cut.rank]
                .iter()
                .map(|e| e.headword.clone())
                .collect()
        }
    };
    Ok(WordList::new(ListKind::Gsl, selected, meta))
}
