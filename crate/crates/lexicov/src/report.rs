//! Coverage evaluation of word lists against texts, with machine- and
//! human-readable rendering.

use crate::config::PipelineConfig;
use crate::coverage::{build_frequency_table, list_coverage, FrequencyTable};
use crate::error::Result;
use crate::fraction::Fraction;
use crate::lemma::LemmaDictionary;
use crate::textnorm::{RawText, StopwordSet};
use crate::wordlist::WordList;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncoveredWord {
    pub word: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub list_id: String,
    pub list_kind: String,
    pub list_size: usize,
    /// Exact coverage; absent when the row is flagged as a config mismatch.
    pub coverage: Option<Fraction>,
    /// Decimal rendering of `coverage` to 4 places.
    pub coverage_decimal: Option<String>,
    pub denominator_policy: String,
    /// The list could not be compared under this config; row kept, flagged.
    pub config_mismatch: bool,
    /// Top uncovered words by count, tie-broken lexicographically.
    pub uncovered_sample: Vec<UncoveredWord>,
}

/// Coverage of each evaluated list against one text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub text_id: String,
    pub total_tokens: u64,
    pub rows: Vec<ReportRow>,
    /// Full pipeline configuration, so every number is reproducible from the
    /// report alone.
    pub config: BTreeMap<String, String>,
    pub generated_at: Option<String>,
}

/// How many uncovered words a row samples by default.
pub const DEFAULT_UNCOVERED_SAMPLE: usize = 25;

fn denominator_policy(config: &PipelineConfig) -> String {
    if config.remove_stopwords {
        "stop_filtered".into()
    } else {
        "all_clean_tokens".into()
    }
}

fn evaluate_row(
    list: &WordList,
    table: &FrequencyTable,
    config: &PipelineConfig,
    sample_size: usize,
) -> ReportRow {
    let coverage = list_coverage(list, table).ok();
    let uncovered_sample = if coverage.is_some() {
        let mut uncovered: Vec<(&str, u64)> = table
            .iter()
            .filter(|(w, _)| !list.contains(w))
            .collect();
        uncovered.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        uncovered
            .into_iter()
            .take(sample_size)
            .map(|(word, count)| UncoveredWord {
                word: word.to_string(),
                count,
            })
            .collect()
    } else {
        Vec::new()
    };
    ReportRow {
        list_id: list.id(),
        list_kind: list.kind.as_str().to_string(),
        list_size: list.size(),
        coverage,
        coverage_decimal: coverage.map(|c| c.to_decimal_string(4)),
        denominator_policy: denominator_policy(config),
        config_mismatch: coverage.is_none(),
        uncovered_sample,
    }
}

/// Evaluate every list against every text. Each text gets one report with one
/// row per list, sorted by coverage descending. Config-mismatched lists are
/// flagged, not dropped; an empty text is an error.
pub fn evaluate(
    texts: &[RawText],
    lists: &[WordList],
    config: &PipelineConfig,
    dict: &LemmaDictionary,
    stops: &StopwordSet,
    sample_size: usize,
    generated_at: Option<String>,
) -> Result<Vec<CoverageReport>> {
    texts
        .par_iter()
        .map(|text| {
            let table = build_frequency_table(text, config, dict, stops)?;
            let mut rows: Vec<ReportRow> = lists
                .iter()
                .map(|list| evaluate_row(list, &table, config, sample_size))
                .collect();
            rows.sort_by(|a, b| match (&b.coverage, &a.coverage) {
                (Some(x), Some(y)) => x.cmp(y).then_with(|| a.list_id.cmp(&b.list_id)),
                (Some(_), None) => std::cmp::Ordering::Greater,
                (None, Some(_)) => std::cmp::Ordering::Less,
                (None, None) => a.list_id.cmp(&b.list_id),
            });
            Ok(CoverageReport {
                text_id: text.source_id.clone(),
                total_tokens: table.total(),
                rows,
                config: config.snapshot(),
                generated_at: generated_at.clone(),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Tsv,
    Markdown,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Option<ReportFormat> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Some(ReportFormat::Json),
            "tsv" => Some(ReportFormat::Tsv),
            "md" | "markdown" => Some(ReportFormat::Markdown),
            _ => None,
        }
    }
}

/// Render a batch of reports as one document.
pub fn render_all(reports: &[CoverageReport], format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(reports).expect("reports serialize");
            out.push(b'\n');
            out
        }
        ReportFormat::Tsv => {
            let mut out = String::from("text\tlist\tkind\tcoverage\tsize\n");
            for report in reports {
                for row in &report.rows {
                    let cov = row
                        .coverage_decimal
                        .clone()
                        .unwrap_or_else(|| "CONFIG_MISMATCH".into());
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}",
                        report.text_id, row.list_id, row.list_kind, cov, row.list_size
                    )
                    .unwrap();
                }
            }
            out.into_bytes()
        }
        ReportFormat::Markdown => {
            let mut out = String::new();
            for report in reports {
                writeln!(out, "## {} ({} tokens)\n", report.text_id, report.total_tokens).unwrap();
                writeln!(out, "| List | Kind | Coverage | Size |").unwrap();
                writeln!(out, "|------|------|----------|------|").unwrap();
                for row in &report.rows {
                    let cov = row
                        .coverage_decimal
                        .clone()
                        .unwrap_or_else(|| "config mismatch".into());
                    writeln!(
                        out,
                        "| {} | {} | {} | {} |",
                        row.list_id, row.list_kind, cov, row.list_size
                    )
                    .unwrap();
                }
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

/// Render one report.
pub fn render(report: &CoverageReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serializes");
            out.push(b'\n');
            out
        }
        _ => render_all(std::slice::from_ref(report), format),
    }
}
