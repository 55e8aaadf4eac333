//! lexicov command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 input/data error. All file
//! outputs are written atomically (temp file + rename).

use clap::{ArgAction, Args, Parser, Subcommand};
use lexicov::config::{LemmaOrder, PipelineConfig};
use lexicov::coverage::{build_swl, rank};
use lexicov::error::Error;
use lexicov::fraction::Fraction;
use lexicov::lemma::LemmaDictionary;
use lexicov::ngram::{aggregate_shards, build_gsl, IngestOptions, ShardStats};
use lexicov::report::{evaluate, render_all, ReportFormat, DEFAULT_UNCOVERED_SAMPLE};
use lexicov::textnorm::{NormOptions, RawText, StopwordSet};
use lexicov::wordlist::{ListKind, WordList};
use lexicov::zipf::{
    default_rank_range, fit_zipf, knee_point, marginal_gains, zipf_points, KneeVerdict,
    ZipfFit, DEFAULT_KNEE_SENSITIVITY,
};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

fn long_version() -> &'static str {
    static VERSION: std::sync::OnceLock<String> = std::sync::OnceLock::new();
    VERSION.get_or_init(|| {
        format!(
            "{} (lemma dictionary {}, stopwords {})",
            env!("CARGO_PKG_VERSION"),
            lexicov::lemma::BUNDLED_LEMMAS_VERSION,
            lexicov::textnorm::BUNDLED_STOPWORDS_VERSION,
        )
    })
}

#[derive(Parser)]
#[command(name = "lexicov", version = long_version(), about = "Word lists with guaranteed lexical coverage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Specialized Word List from a text
    Swl(SwlArgs),
    /// Build a General Service List from n-gram shards
    Gsl(GslArgs),
    /// Evaluate word lists against texts
    Coverage(CoverageArgs),
    /// Rank-frequency diagnostics (Zipf fit, knee analysis)
    Zipf(ZipfArgs),
    /// Parse n-gram shards and report ingestion statistics
    IngestStats(IngestStatsArgs),
    /// Build an SWL, evaluate it alongside reference lists, emit a results table
    Replicate(ReplicateArgs),
}

/// Pipeline toggles shared by list-building subcommands.
#[derive(Args, Clone)]
struct PipelineArgs {
    /// Coverage threshold: fraction (0.95), percent (95%), or ratio (19/20)
    #[arg(long)]
    threshold: Option<String>,
    /// Disable lemmatization
    #[arg(long)]
    no_lemmatize: bool,
    /// Remove stop words (also excludes them from the coverage denominator)
    #[arg(long)]
    remove_stopwords: bool,
    /// Keep detected proper nouns, exempt from lemmatization (default true)
    #[arg(long, num_args(0..=1), default_missing_value = "true", action = ArgAction::Set)]
    keep_proper_nouns: Option<bool>,
    /// Cap the list at this many words
    #[arg(long)]
    max_size: Option<usize>,
    /// When to lemmatize: before-count (default) or after-cutoff
    #[arg(long)]
    lemma_order: Option<String>,
    /// Word list file of known words to exclude from the output
    #[arg(long)]
    exclude: Option<PathBuf>,
    /// Split hyphenated compounds into parts instead of dropping them
    #[arg(long)]
    split_hyphens: bool,
    /// Extra letters accepted beyond ASCII a-z (e.g. "éü")
    #[arg(long, default_value = "")]
    extra_letters: String,
    /// Proper-noun capitalization-ratio threshold
    #[arg(long, default_value_t = 0.9)]
    proper_threshold: f64,
    /// Minimum occurrences before a word can be judged proper
    #[arg(long, default_value_t = 3)]
    proper_min_count: u64,
    /// Lemma dictionary TSV (surface<TAB>lemma)
    #[arg(long)]
    lemma_dict: Option<PathBuf>,
    /// Stopword file, one word per line
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Worker threads (default: available cores)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct SwlArgs {
    /// Input text file (UTF-8)
    #[arg(long, required = true)]
    input: PathBuf,
    /// Output word list file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct GslArgs {
    /// N-gram shard files or directories of shards
    #[arg(long, required = true, num_args(1..))]
    ngram: Vec<PathBuf>,
    /// Drop records from years strictly before this
    #[arg(long, default_value_t = 1800)]
    min_year: i32,
    /// Select the top N headwords (mutually exclusive with --threshold)
    #[arg(long, conflicts_with = "threshold")]
    size: Option<usize>,
    /// Drop words with aggregate count below this floor
    #[arg(long)]
    min_count: Option<u64>,
    /// Output word list file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write ingestion statistics JSON here
    #[arg(long)]
    stats: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct CoverageArgs {
    /// Text files to evaluate against
    #[arg(long, required = true, num_args(1..))]
    text: Vec<PathBuf>,
    /// Word list files to evaluate
    #[arg(long, required = true, num_args(1..))]
    list: Vec<PathBuf>,
    /// Also evaluate the union of all lists as one combined list
    #[arg(long)]
    union: bool,
    /// Output format
    #[arg(long, default_value = "tsv")]
    format: String,
    /// Output file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Uncovered words sampled per row
    #[arg(long, default_value_t = DEFAULT_UNCOVERED_SAMPLE)]
    sample: usize,
    /// Omit the generated_at timestamp for byte-reproducible output
    #[arg(long)]
    no_timestamp: bool,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct ZipfArgs {
    /// Input text file
    #[arg(long, required = true)]
    input: PathBuf,
    /// CSV output: rank,count,coverage,cum_coverage,log_rank,log_count
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON fit + knee summary (stdout when omitted)
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Fit range low rank (default: 10)
    #[arg(long)]
    lo: Option<usize>,
    /// Fit range high rank (default: last rank with count >= 3)
    #[arg(long)]
    hi: Option<usize>,
    /// Knee detection sensitivity
    #[arg(long, default_value_t = DEFAULT_KNEE_SENSITIVITY)]
    knee_sensitivity: f64,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct IngestStatsArgs {
    /// N-gram shard files or directories of shards
    #[arg(long, required = true, num_args(1..))]
    ngram: Vec<PathBuf>,
    #[arg(long, default_value_t = 1800)]
    min_year: i32,
    /// Stats JSON output (stdout when omitted)
    #[arg(long)]
    stats: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct ReplicateArgs {
    /// Input text file
    #[arg(long, required = true)]
    input: PathBuf,
    /// Reference word list files to compare against the generated SWL
    #[arg(long, num_args(0..))]
    list: Vec<PathBuf>,
    /// Results table output (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the generated SWL here
    #[arg(long)]
    swl_output: Option<PathBuf>,
    /// Omit the generated_at timestamp for byte-reproducible output
    #[arg(long)]
    no_timestamp: bool,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

/// Usage problems exit 1; data problems exit 2.
enum CliError {
    Usage(String),
    Data(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidThreshold(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful outcomes
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Swl(args) => cmd_swl(args),
        Command::Gsl(args) => cmd_gsl(args),
        Command::Coverage(args) => cmd_coverage(args),
        Command::Zipf(args) => cmd_zipf(args),
        Command::IngestStats(args) => cmd_ingest_stats(args),
        Command::Replicate(args) => cmd_replicate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_threshold(raw: &str) -> Result<Fraction, CliError> {
    let t: Fraction = raw.parse().map_err(|_| {
        CliError::Usage(format!("--threshold {raw}: not a fraction, percent, or ratio"))
    })?;
    if t.is_zero() || t > Fraction::ONE {
        return Err(CliError::Usage(format!(
            "--threshold {raw}: must be in (0, 1]"
        )));
    }
    Ok(t)
}

fn build_config(args: &PipelineArgs) -> Result<PipelineConfig, CliError> {
    let mut config = PipelineConfig::default();
    if let Some(raw) = &args.threshold {
        config.threshold = parse_threshold(raw)?;
    }
    config.lemmatize = !args.no_lemmatize;
    config.remove_stopwords = args.remove_stopwords;
    if let Some(keep) = args.keep_proper_nouns {
        config.keep_proper_nouns = keep;
    }
    if let Some(max) = args.max_size {
        if max == 0 {
            return Err(CliError::Usage("--max-size must be >= 1".into()));
        }
        config.max_size = Some(max);
    }
    if let Some(order) = &args.lemma_order {
        config.lemma_order = LemmaOrder::parse(order).ok_or_else(|| {
            CliError::Usage(format!(
                "--lemma-order {order}: expected before-count or after-cutoff"
            ))
        })?;
    }
    config.split_hyphens = args.split_hyphens;
    config.extra_letters = args.extra_letters.clone();
    if !(0.0..=1.0).contains(&args.proper_threshold) {
        return Err(CliError::Usage(format!(
            "--proper-threshold {}: must be in [0, 1]",
            args.proper_threshold
        )));
    }
    config.proper_threshold = args.proper_threshold;
    config.proper_min_count = args.proper_min_count;
    if let Some(path) = &args.exclude {
        let list = WordList::load(path)?;
        config.exclude_list = Some(list.headwords().to_vec());
    }
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be >= 1".into()));
        }
        // ignore the error if a pool was already installed
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    Ok(config)
}

fn data_dir_file(name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("LEXICOV_DATA_DIR")?;
    let path = Path::new(&dir).join(name);
    path.exists().then_some(path)
}

fn load_dictionary(args: &PipelineArgs) -> Result<LemmaDictionary, CliError> {
    match args.lemma_dict.clone().or_else(|| data_dir_file("lemmas_en.tsv")) {
        Some(path) => Ok(LemmaDictionary::load(&path)?),
        None => Ok(LemmaDictionary::bundled()),
    }
}

fn load_stopwords(args: &PipelineArgs) -> Result<StopwordSet, CliError> {
    match args.stopwords.clone().or_else(|| data_dir_file("stopwords_en.txt")) {
        Some(path) => Ok(StopwordSet::load(&path)?),
        None => Ok(StopwordSet::bundled()),
    }
}

/// Write through a temp file in the destination directory, then rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{}: not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp.{}",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, bytes).map_err(|e| CliError::Data(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::Data(format!("{}: {e}", path.display()))
    })?;
    Ok(())
}

fn emit(output: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match output {
        Some(path) => write_atomic(path, bytes),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Data(e.to_string()))
        }
    }
}

fn timestamp(suppress: bool) -> Option<String> {
    if suppress {
        return None;
    }
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Some(secs.to_string())
}

fn cmd_swl(args: SwlArgs) -> Result<(), CliError> {
    let config = build_config(&args.pipeline)?;
    let dict = load_dictionary(&args.pipeline)?;
    let stops = load_stopwords(&args.pipeline)?;
    let text = RawText::load(&args.input)?;
    let list = build_swl(&text, &config, &dict, &stops)?;
    emit(args.output.as_ref(), list.to_file_string().as_bytes())
}

/// Expand directories into their contained files, sorted for determinism.
fn expand_shards(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            entries.sort();
            out.extend(entries);
        } else {
            out.push(path.clone());
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("--ngram matched no shard files".into()));
    }
    Ok(out)
}

#[derive(Serialize)]
struct IngestReport<'a> {
    total: &'a lexicov::ngram::IngestStats,
    shards: &'a [ShardStats],
}

fn cmd_gsl(args: GslArgs) -> Result<(), CliError> {
    let mut config = build_config(&args.pipeline)?;
    if let Some(size) = args.size {
        if size == 0 {
            return Err(CliError::Usage("--size must be >= 1".into()));
        }
        config.max_size = Some(size);
    } else if args.pipeline.threshold.is_none() {
        return Err(CliError::Usage(
            "gsl requires either --size or --threshold".into(),
        ));
    }
    let dict = load_dictionary(&args.pipeline)?;
    let shards = expand_shards(&args.ngram)?;
    let opts = IngestOptions {
        min_year: args.min_year,
        min_count: args.min_count,
        norm: NormOptions::from_config(&config),
    };
    let (table, total, per_shard) = aggregate_shards(&shards, &opts, &config)?;
    let list = build_gsl(&table, &config, &dict)?;
    emit(args.output.as_ref(), list.to_file_string().as_bytes())?;
    if let Some(stats_path) = &args.stats {
        let report = IngestReport {
            total: &total,
            shards: &per_shard,
        };
        let mut bytes = serde_json::to_vec_pretty(&report).expect("stats serialize");
        bytes.push(b'\n');
        write_atomic(stats_path, &bytes)?;
    }
    Ok(())
}

fn cmd_ingest_stats(args: IngestStatsArgs) -> Result<(), CliError> {
    let config = build_config(&args.pipeline)?;
    let shards = expand_shards(&args.ngram)?;
    let opts = IngestOptions {
        min_year: args.min_year,
        min_count: None,
        norm: NormOptions::from_config(&config),
    };
    let (_, total, per_shard) = aggregate_shards(&shards, &opts, &config)?;
    let report = IngestReport {
        total: &total,
        shards: &per_shard,
    };
    let mut bytes = serde_json::to_vec_pretty(&report).expect("stats serialize");
    bytes.push(b'\n');
    emit(args.stats.as_ref(), &bytes)
}

fn cmd_coverage(args: CoverageArgs) -> Result<(), CliError> {
    let format = ReportFormat::parse(&args.format)
        .ok_or_else(|| CliError::Usage(format!("--format {}: expected json, tsv, or md", args.format)))?;
    let config = build_config(&args.pipeline)?;
    let dict = load_dictionary(&args.pipeline)?;
    let stops = load_stopwords(&args.pipeline)?;
    let texts: Vec<RawText> = args
        .text
        .iter()
        .map(|p| RawText::load(p))
        .collect::<Result<_, _>>()?;
    let mut lists: Vec<WordList> = args
        .list
        .iter()
        .map(|p| WordList::load(p))
        .collect::<Result<_, _>>()?;
    if args.union {
        let mut union_words = Vec::new();
        for l in &lists {
            union_words.extend(l.headwords().iter().cloned());
        }
        let mut meta = BTreeMap::new();
        meta.insert("source".into(), "union".into());
        lists.push(WordList::new(ListKind::Reference, union_words, meta));
    }
    let reports = evaluate(
        &texts,
        &lists,
        &config,
        &dict,
        &stops,
        args.sample,
        timestamp(args.no_timestamp),
    )?;
    emit(args.output.as_ref(), &render_all(&reports, format))
}

#[derive(Serialize)]
struct ZipfSummary {
    text: String,
    total_tokens: u64,
    distinct_words: usize,
    fit: Option<ZipfFit>,
    fit_error: Option<String>,
    knee_verdict: KneeVerdict,
    knee_rank: Option<usize>,
    knee_max_distance: f64,
    knee_sensitivity: f64,
}

fn cmd_zipf(args: ZipfArgs) -> Result<(), CliError> {
    let config = build_config(&args.pipeline)?;
    let dict = load_dictionary(&args.pipeline)?;
    let stops = load_stopwords(&args.pipeline)?;
    let text = RawText::load(&args.input)?;
    let table = lexicov::coverage::build_frequency_table(&text, &config, &dict, &stops)?;
    let ranked = rank(&table);

    if let Some(csv_path) = &args.output {
        let mut csv = String::from("rank,count,coverage,cum_coverage,log_rank,log_count\n");
        let points = zipf_points(&ranked);
        for (entry, (log_rank, log_count)) in ranked.entries.iter().zip(points) {
            writeln!(
                csv,
                "{},{},{},{},{},{}",
                entry.rank,
                entry.count,
                entry.coverage.to_decimal_string(6),
                entry.cum_coverage.to_decimal_string(6),
                log_rank,
                log_count
            )
            .unwrap();
        }
        write_atomic(csv_path, csv.as_bytes())?;
    }

    let range = match (args.lo, args.hi) {
        (None, None) => default_rank_range(&ranked),
        (lo, hi) => {
            let default = default_rank_range(&ranked);
            (lo.unwrap_or(default.0), hi.unwrap_or(default.1))
        }
    };
    // fall back to the full list when the default window is too narrow
    let fit = fit_zipf(&ranked, Some(range))
        .or_else(|_| fit_zipf(&ranked, Some((1, ranked.entries.len()))));
    let gains = marginal_gains(&ranked);
    let knee = knee_point(&gains, args.knee_sensitivity);
    let summary = ZipfSummary {
        text: text.source_id.clone(),
        total_tokens: table.total(),
        distinct_words: table.distinct(),
        fit: fit.as_ref().ok().copied(),
        fit_error: fit.err().map(|e| e.to_string()),
        knee_verdict: knee.verdict,
        knee_rank: knee.knee_rank,
        knee_max_distance: knee.max_distance,
        knee_sensitivity: args.knee_sensitivity,
    };
    let mut bytes = serde_json::to_vec_pretty(&summary).expect("summary serialize");
    bytes.push(b'\n');
    emit(args.summary.as_ref(), &bytes)
}

fn cmd_replicate(args: ReplicateArgs) -> Result<(), CliError> {
    let config = build_config(&args.pipeline)?;
    let dict = load_dictionary(&args.pipeline)?;
    let stops = load_stopwords(&args.pipeline)?;
    let text = RawText::load(&args.input)?;

    // vocabulary sizes before and after lemmatization, for the summary
    let raw_config = PipelineConfig {
        lemmatize: false,
        ..config.clone()
    };
    let raw_table =
        lexicov::coverage::build_frequency_table(&text, &raw_config, &dict, &stops)?;
    let table = lexicov::coverage::build_frequency_table(&text, &config, &dict, &stops)?;

    let swl = build_swl(&text, &config, &dict, &stops)?;
    if let Some(path) = &args.swl_output {
        write_atomic(path, swl.to_file_string().as_bytes())?;
    }
    let mut lists = vec![swl.clone()];
    for path in &args.list {
        lists.push(WordList::load(path)?);
    }
    let reports = evaluate(
        std::slice::from_ref(&text),
        &lists,
        &config,
        &dict,
        &stops,
        DEFAULT_UNCOVERED_SAMPLE,
        timestamp(args.no_timestamp),
    )?;

    let mut out = String::new();
    writeln!(out, "# text={}", text.source_id).unwrap();
    writeln!(out, "# total_tokens={}", table.total()).unwrap();
    writeln!(out, "# raw_vocabulary={}", raw_table.distinct()).unwrap();
    writeln!(out, "# vocabulary={}", table.distinct()).unwrap();
    writeln!(out, "# swl_size={}", swl.size()).unwrap();
    writeln!(out, "# threshold={}", config.threshold).unwrap();
    out.push_str(&String::from_utf8(render_all(&reports, ReportFormat::Tsv)).unwrap());
    emit(args.output.as_ref(), out.as_bytes())
}
