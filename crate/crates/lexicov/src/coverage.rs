//! Frequency counting, ranking, coverage arithmetic, and list construction.
//!
//! Coverage is kept as exact rationals end to end, which makes the central
//! guarantee checkable as an integer identity: a list cut at threshold `t`
//! covers at least `t` of the text it was cut from.

use crate::config::{LemmaOrder, PipelineConfig};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::lemma::{
    apply_proper_noun_policy, detect_proper_nouns, lemmatize, LemmaDictionary, ProperNounOptions,
};
use crate::textnorm::{clean_stream, tokenize, NormOptions, RawText, StopwordSet};
use crate::wordlist::{exclude_known, ListKind, WordList};
use std::collections::BTreeMap;

/// Where a frequency table came from and under which settings.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub source_id: String,
    pub config: PipelineConfig,
}

/// Exact word counts over a normalized token stream.
#[derive(Clone, Debug)]
pub struct FrequencyTable {
    counts: BTreeMap<String, u64>,
    total: u64,
    pub provenance: Provenance,
}

impl FrequencyTable {
    /// Count a headword sequence. The total is the sequence length; an empty
    /// sequence is an error, not a degenerate table.
    pub fn from_words(headwords: &[String], provenance: Provenance) -> Result<FrequencyTable> {
        if headwords.is_empty() {
            return Err(Error::EmptyInput(provenance.source_id));
        }
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for w in headwords {
            *counts.entry(w.clone()).or_insert(0) += 1;
        }
        Ok(FrequencyTable {
            counts,
            total: headwords.len() as u64,
            provenance,
        })
    }

    /// Build directly from pre-aggregated counts (the n-gram ingest path).
    pub fn from_counts(counts: BTreeMap<String, u64>, provenance: Provenance) -> Result<FrequencyTable> {
        let counts: BTreeMap<String, u64> =
            counts.into_iter().filter(|(_, c)| *c > 0).collect();
        if counts.is_empty() {
            return Err(Error::EmptyInput(provenance.source_id));
        }
        let total = counts.values().sum();
        Ok(FrequencyTable {
            counts,
            total,
            provenance,
        })
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    /// Total token count N.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct headwords.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(w, c)| (w.as_str(), *c))
    }

    /// count(word) / N as an exact rational; zero for absent words.
    pub fn coverage_of(&self, word: &str) -> Fraction {
        Fraction::new(self.count(word), self.total)
    }
}

/// Convenience free function mirroring the table constructor.
pub fn count_frequencies(headwords: &[String], provenance: Provenance) -> Result<FrequencyTable> {
    FrequencyTable::from_words(headwords, provenance)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankedEntry {
    /// 1-based rank.
    pub rank: usize,
    pub headword: String,
    pub count: u64,
    pub coverage: Fraction,
    pub cum_coverage: Fraction,
}

/// Frequency-descending entries with exact per-rank and cumulative coverage.
#[derive(Clone, Debug)]
pub struct RankedList {
    pub entries: Vec<RankedEntry>,
    pub total: u64,
}

/// Sort count-descending with lexicographic tiebreak and accumulate coverage.
/// The final cumulative coverage is exactly 1.
pub fn rank(table: &FrequencyTable) -> RankedList {
    let mut items: Vec<(&str, u64)> = table.iter().collect();
    items.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let n = table.total();
    let mut cum = 0u64;
    let entries = items
        .into_iter()
        .enumerate()
        .map(|(i, (word, count))| {
            cum += count;
            RankedEntry {
                rank: i + 1,
                headword: word.to_string(),
                count,
                coverage: Fraction::new(count, n),
                cum_coverage: Fraction::new(cum, n),
            }
        })
        .collect();
    RankedList { entries, total: n }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffResult {
    /// 1-based rank p: the first rank whose cumulative coverage reaches or
    /// exceeds the threshold.
    pub rank: usize,
    pub achieved: Fraction,
    pub threshold: Fraction,
}

/// Find the smallest rank at or crossing the threshold. Always succeeds for
/// thresholds in (0, 1] because the final cumulative coverage is 1.
pub fn cutoff(ranked: &RankedList, threshold: Fraction) -> CutoffResult {
    debug_assert!(!ranked.entries.is_empty());
    let idx = ranked
        .entries
        .iter()
        .position(|e| e.cum_coverage >= threshold)
        .unwrap_or(ranked.entries.len() - 1);
    CutoffResult {
        rank: idx + 1,
        achieved: ranked.entries[idx].cum_coverage,
        threshold,
    }
}

/// The normalized headword stream for a text under a config: tokenize, clean,
/// optionally drop stopwords, apply the proper-noun policy, and lemmatize
/// (unless deferred to after the cutoff).
pub fn headword_stream(
    text: &RawText,
    config: &PipelineConfig,
    dict: &LemmaDictionary,
    stops: &StopwordSet,
) -> Vec<String> {
    let tokens = tokenize(text);
    let opts = NormOptions::from_config(config);
    let mut stream = clean_stream(&tokens, &opts);
    let verdicts = detect_proper_nouns(
        &stream,
        ProperNounOptions {
            threshold: config.proper_threshold,
            min_count: config.proper_min_count,
        },
    );
    if config.remove_stopwords {
        stream.retain(|t| !stops.contains(&t.word));
    }
    let words: Vec<String> = stream.into_iter().map(|t| t.word).collect();
    let lemma_now = config.lemmatize && config.lemma_order == LemmaOrder::BeforeCount;
    apply_proper_noun_policy(
        &words,
        &verdicts,
        config.keep_proper_nouns,
        lemma_now.then_some(dict),
    )
}

/// Build the text's frequency table under the given config. Lemmatization is
/// applied whenever enabled, regardless of `lemma_order`; evaluation always
/// compares lemma against lemma.
pub fn build_frequency_table(
    text: &RawText,
    config: &PipelineConfig,
    dict: &LemmaDictionary,
    stops: &StopwordSet,
) -> Result<FrequencyTable> {
    let mut eval_config = config.clone();
    eval_config.lemma_order = LemmaOrder::BeforeCount;
    let words = headword_stream(text, &eval_config, dict, stops);
    FrequencyTable::from_words(
        &words,
        Provenance {
            source_id: text.source_id.clone(),
            config: config.clone(),
        },
    )
}

/// Build a Specialized Word List: the smallest frequency-rank prefix of the
/// text's own headwords whose cumulative coverage reaches the threshold,
/// subject to the configured size cap and exclusions.
pub fn build_swl(
    text: &RawText,
    config: &PipelineConfig,
    dict: &LemmaDictionary,
    stops: &StopwordSet,
) -> Result<WordList> {
    config.validate()?;
    let words = headword_stream(text, config, dict, stops);
    let table = FrequencyTable::from_words(
        &words,
        Provenance {
            source_id: text.source_id.clone(),
            config: config.clone(),
        },
    )?;
    let ranked = rank(&table);
    let cut = cutoff(&ranked, config.threshold);
    let mut selected: Vec<String> = ranked.entries[..cut.rank]
        .iter()
        .map(|e| e.headword.clone())
        .collect();
    let mut achieved = cut.achieved;
    let mut meta = config.snapshot();
    meta.insert("source".into(), text.source_id.clone());
    meta.insert("dict_version".into(), dict.version.clone());
    if config.remove_stopwords {
        meta.insert("stopwords_version".into(), stops.version.clone());
        meta.insert("denominator".into(), "stop_filtered".into());
    } else {
        meta.insert("denominator".into(), "all_clean_tokens".into());
    }

    if config.lemmatize && config.lemma_order == LemmaOrder::AfterCutoff {
        // counting happened on surface forms; lemmatize the survivors now.
        // Proper nouns kept by the policy stay verbatim, matching the
        // before-count path.
        let verdicts = {
            let tokens = tokenize(text);
            let opts = NormOptions::from_config(config);
            detect_proper_nouns(
                &clean_stream(&tokens, &opts),
                ProperNounOptions {
                    threshold: config.proper_threshold,
                    min_count: config.proper_min_count,
                },
            )
        };
        selected = selected
            .into_iter()
            .map(|w| {
                let proper = verdicts.get(&w).is_some_and(|v| v.is_proper);
                if proper && config.keep_proper_nouns {
                    w
                } else {
                    lemmatize(&w, dict)
                }
            })
            .collect();
        meta.insert("achieved_on".into(), "surface_counts".into());
    }

    if let Some(cap) = config.max_size {
        if cap < selected.len() {
            selected.truncate(cap);
            achieved = ranked.entries[cap - 1].cum_coverage;
            if achieved < config.threshold {
                meta.insert("threshold_unreachable".into(), "true".into());
            }
            meta.insert("truncated_to".into(), cap.to_string());
        }
    }
    meta.insert("achieved".into(), format!("{achieved}"));

    let mut list = WordList::new(ListKind::Swl, selected, meta);
    if let Some(exclude) = &config.exclude_list {
        let known = WordList::new(
            ListKind::Reference,
            exclude.clone(),
            BTreeMap::new(),
        );
        list = exclude_known(&list, &known);
    }
    Ok(list)
}

/// Sum of the table's counts over the list's members, divided by N.
/// Errors when the list was demonstrably built under different lemmatization
/// settings than the table.
pub fn list_coverage(list: &WordList, table: &FrequencyTable) -> Result<Fraction> {
    check_config_compatible(list, table)?;
    let covered: u64 = list.headwords().iter().map(|w| table.count(w)).sum();
    Ok(Fraction::new(covered, table.total()))
}

fn check_config_compatible(list: &WordList, table: &FrequencyTable) -> Result<()> {
    let table_setting = table.provenance.config.lemmatize.to_string();
    if let Some(list_setting) = list.meta.get("lemmatize") {
        if *list_setting != table_setting {
            return Err(Error::ConfigMismatch {
                list: list.id(),
                list_setting: format!("lemmatize={list_setting}"),
                table_setting: format!("lemmatize={table_setting}"),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PipelineConfig;

    fn words(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|s| s.to_string()).collect()
    }

    fn prov() -> Provenance {
        Provenance {
            source_id: "test".into(),
            config: PipelineConfig::default(),
        }
    }

    fn table_of(ws: &[&str]) -> FrequencyTable {
        FrequencyTable::from_words(&words(ws), prov()).unwrap()
    }

    #[test]
    fn counts_are_exact() {
        let t = table_of(&["cat", "dog", "cat"]);
        assert_eq!(t.count("cat"), 2);
        assert_eq!(t.count("dog"), 1);
        assert_eq!(t.total(), 3);
        assert_eq!(t.distinct(), 2);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            FrequencyTable::from_words(&[], prov()),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn coverage_of_worked_example() {
        // dog appears 20 times in a 1000-token book: coverage 2%
        let mut counts = BTreeMap::new();
        counts.insert("dog".to_string(), 20);
        counts.insert("cat".to_string(), 10);
        counts.insert("filler".to_string(), 970);
        let t = FrequencyTable::from_counts(counts, prov()).unwrap();
        assert_eq!(t.coverage_of("dog"), Fraction::new(2, 100));
        assert_eq!(t.coverage_of("absent"), Fraction::ZERO);
        // coverage accumulates through addition: dog + cat = 3%
        let both = t.coverage_of("dog").add(&t.coverage_of("cat"));
        assert_eq!(both, Fraction::new(3, 100));
    }

    #[test]
    fn ranking_with_cumulative_sums() {
        let mut counts = BTreeMap::new();
        for (w, c) in [("a", 5u64), ("b", 3), ("c", 1), ("d", 1)] {
            counts.insert(w.to_string(), c);
        }
        let ranked = rank(&FrequencyTable::from_counts(counts, prov()).unwrap());
        let cums: Vec<Fraction> = ranked.entries.iter().map(|e| e.cum_coverage).collect();
        assert_eq!(
            cums,
            [
                Fraction::new(5, 10),
                Fraction::new(8, 10),
                Fraction::new(9, 10),
                Fraction::ONE
            ]
        );
        // ties broken lexicographically
        assert_eq!(ranked.entries[2].headword, "c");
        assert_eq!(ranked.entries[3].headword, "d");
    }

    #[test]
    fn single_word_ranks_first_with_full_coverage() {
        let mut counts = BTreeMap::new();
        counts.insert("x".to_string(), 7);
        let ranked = rank(&FrequencyTable::from_counts(counts, prov()).unwrap());
        assert_eq!(ranked.entries.len(), 1);
        assert_eq!(ranked.entries[0].rank, 1);
        assert_eq!(ranked.entries[0].coverage, Fraction::ONE);
    }

    #[test]
    fn cutoff_picks_first_rank_at_or_over() {
        let t = {
            let mut counts = BTreeMap::new();
            for (w, c) in [("a", 5u64), ("b", 3), ("c", 1), ("d", 1)] {
                counts.insert(w.to_string(), c);
            }
            FrequencyTable::from_counts(counts, prov()).unwrap()
        };
        let ranked = rank(&t);
        let cut = cutoff(&ranked, Fraction::new(8, 10));
        assert_eq!(cut.rank, 2);
        assert_eq!(cut.achieved, Fraction::new(8, 10));
        assert_eq!(cutoff(&ranked, Fraction::ONE).rank, 4);
        assert_eq!(cutoff(&ranked, Fraction::new(1, 10000)).rank, 1);
    }

    fn text(s: &str) -> RawText {
        RawText::new(s, "doc")
    }

    #[test]
    fn swl_self_coverage_meets_threshold() {
        let dict = LemmaDictionary::bundled();
        let stops = StopwordSet::bundled();
        let content = "the cat sat on the mat. the dog ran after the cat. \
                       a bird watched the dog and the cat quietly from the old tree.";
        for th in ["0.5", "0.8", "0.95", "1.0"] {
            let mut config = PipelineConfig::default();
            config.threshold = th.parse().unwrap();
            let list = build_swl(&text(content), &config, &dict, &stops).unwrap();
            let table = build_frequency_table(&text(content), &config, &dict, &stops).unwrap();
            let cov = list_coverage(&list, &table).unwrap();
            assert!(
                cov >= config.threshold,
                "coverage {cov} below threshold {th}"
            );
        }
    }

    #[test]
    fn swl_records_truncation_when_capped() {
        let dict = LemmaDictionary::bundled();
        let stops = StopwordSet::bundled();
        let mut config = PipelineConfig::default();
        config.max_size = Some(1);
        let list = build_swl(&text("a a a b b c d e f g"), &config, &dict, &stops).unwrap();
        assert_eq!(list.size(), 1);
        assert_eq!(list.meta["truncated_to"], "1");
        assert_eq!(list.meta["threshold_unreachable"], "true");
        assert_eq!(list.meta["achieved"], "3/10");
    }

    #[test]
    fn swl_applies_exclude_list() {
        let dict = LemmaDictionary::bundled();
        let stops = StopwordSet::bundled();
        let mut config = PipelineConfig::default();
        config.exclude_list = Some(vec!["cat".into()]);
        let list = build_swl(&text("cat cat dog"), &config, &dict, &stops).unwrap();
        assert!(!list.contains("cat"));
        assert!(list.contains("dog"));
    }

    #[test]
    fn full_vocabulary_covers_everything() {
        let t = table_of(&["x", "y", "y", "z"]);
        let all: Vec<String> = t.iter().map(|(w, _)| w.to_string()).collect();
        let list = WordList::new(ListKind::Reference, all, BTreeMap::new());
        assert_eq!(list_coverage(&list, &t).unwrap(), Fraction::ONE);
    }

    #[test]
    fn config_mismatch_is_detected() {
        let t = table_of(&["x", "y"]); // default config: lemmatize=true
        let mut meta = BTreeMap::new();
        meta.insert("lemmatize".into(), "false".into());
        let list = WordList::new(ListKind::Swl, vec!["x".into()], meta);
        assert!(matches!(
            list_coverage(&list, &t),
            Err(Error::ConfigMismatch { .. })
        ));
        // reference lists without recorded settings are accepted
        let plain = WordList::new(ListKind::Reference, vec!["x".into()], BTreeMap::new());
        assert!(list_coverage(&plain, &t).is_ok());
    }

    #[test]
    fn coverages_sum_to_one_exactly() {
        let t = table_of(&["a", "b", "b", "c", "c", "c", "d"]);
        let total = t
            .iter()
            .map(|(w, _)| t.coverage_of(w))
            .fold(Fraction::ZERO, |acc, f| acc.add(&f));
        assert_eq!(total, Fraction::ONE);
    }

    #[test]
    fn lemma_order_after_cutoff_dedupes_survivors() {
        let dict = LemmaDictionary::bundled();
        let stops = StopwordSet::bundled();
        let mut config = PipelineConfig::default();
        config.lemma_order = LemmaOrder::AfterCutoff;
        config.threshold = Fraction::ONE;
        let list = build_swl(
            &text("running runs ran walks walked"),
            &config,
            &dict,
            &stops,
        )
        .unwrap();
        // running/runs/ran collapse to run, walks/walked to walk
        assert_eq!(list.size(), 2);
        assert!(list.contains("run"));
        assert!(list.contains("walk"));
    }
}
