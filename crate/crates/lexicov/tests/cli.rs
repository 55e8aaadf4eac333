//! End-to-end CLI contract tests: exit codes, flag handling, output files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lexicov"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn texts_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/texts")
}

fn alice() -> String {
    texts_dir().join("alice.txt").to_str().unwrap().to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn success_exits_zero() {
    let out = run(&["swl", "--input", &alice()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    // unknown flag
    assert_eq!(code(&run(&["swl", "--input", &alice(), "--bogus"])), 1);
    // missing required argument
    assert_eq!(code(&run(&["swl"])), 1);
    // unparseable threshold
    assert_eq!(code(&run(&["swl", "--input", &alice(), "--threshold", "huge"])), 1);
    // threshold out of range
    assert_eq!(code(&run(&["swl", "--input", &alice(), "--threshold", "1.5"])), 1);
    assert_eq!(code(&run(&["swl", "--input", &alice(), "--threshold", "0"])), 1);
    // bad lemma order
    assert_eq!(code(&run(&["swl", "--input", &alice(), "--lemma-order", "midway"])), 1);
    // gsl needs a size or a threshold, and refuses both
    let shard = write_shard();
    let shard_arg = shard.path().join("s.tsv");
    let shard_arg = shard_arg.to_str().unwrap();
    assert_eq!(code(&run(&["gsl", "--ngram", shard_arg])), 1);
    assert_eq!(
        code(&run(&["gsl", "--ngram", shard_arg, "--size", "2", "--threshold", "0.5"])),
        1
    );
}

#[test]
fn data_errors_exit_two() {
    // missing input file
    assert_eq!(code(&run(&["swl", "--input", "/nonexistent/file.txt"])), 2);
    // invalid UTF-8 input
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, [0xff, 0xfe, 0x41]).unwrap();
    assert_eq!(code(&run(&["swl", "--input", bad.to_str().unwrap()])), 2);
    // text with no usable tokens
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "1984 2001 ---").unwrap();
    assert_eq!(code(&run(&["swl", "--input", empty.to_str().unwrap()])), 2);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    let out = run(&["--version"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("lemma dictionary"), "version lists data versions: {text}");
    assert!(text.contains("stopwords"));
}

#[test]
fn threshold_accepts_fraction_percent_and_ratio() {
    let variants = [
        vec!["swl", "--input"],
        vec!["swl", "--input"],
        vec!["swl", "--input"],
    ];
    let forms = ["0.95", "95%", "19/20"];
    let alice = alice();
    let outputs: Vec<Vec<u8>> = variants
        .iter()
        .zip(forms)
        .map(|(base, t)| {
            let mut args: Vec<&str> = base.clone();
            args.push(&alice);
            args.extend(["--threshold", t]);
            let out = run(&args);
            assert_eq!(code(&out), 0);
            out.stdout
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn output_files_are_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("swl.txt");
    let out = run(&["swl", "--input", &alice(), "--output", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with("# kind=swl"));
    assert!(written.ends_with('\n'));
    // no temp debris in the output directory
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n != "swl.txt")
        .collect();
    assert!(leftovers.is_empty(), "temp files left behind: {leftovers:?}");

    // overwriting an existing file replaces it completely
    let stdout_run = run(&["swl", "--input", &alice(), "--threshold", "0.8"]);
    std::fs::write(&out_path, "stale contents").unwrap();
    let out = run(&[
        "swl",
        "--input",
        &alice(),
        "--threshold",
        "0.8",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&out_path).unwrap(), stdout_run.stdout);
}

fn write_shard() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.tsv"),
        "run_VERB\t1990\t8\t3\ncat\t1995\t4\t2\nrunning\t1997\t2\t1\nold\t1700\t9\t1\n???\t1990\t1\t1\n",
    )
    .unwrap();
    dir
}

#[test]
fn gsl_builds_from_shard_directory() {
    let dir = write_shard();
    let out_dir = dir.path().join("out");
    std::fs::create_dir(&out_dir).unwrap();
    let out_path = out_dir.join("gsl.txt");
    let stats_path = out_dir.join("stats.json");
    let shard_dir = dir.path().to_str().unwrap().to_string();
    let out = run(&[
        "gsl",
        "--ngram",
        &shard_dir,
        "--size",
        "2",
        "--output",
        out_path.to_str().unwrap(),
        "--stats",
        stats_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let list = std::fs::read_to_string(&out_path).unwrap();
    let words: Vec<&str> = list.lines().filter(|l| !l.starts_with('#')).collect();
    // run(8) + running(2) merge to run=10, ahead of cat=4
    assert_eq!(words, ["run", "cat"]);
    assert!(list.contains("# kind=gsl"));

    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&stats_path).unwrap()).unwrap();
    assert_eq!(stats["total"]["lines_read"], 5);
    assert_eq!(stats["total"]["records_year_filtered"], 1);
    assert_eq!(stats["total"]["tokens_cleaned_away"], 1);
}

#[test]
fn ingest_stats_reports_accounting() {
    let dir = write_shard();
    let shard = dir.path().join("s.tsv");
    let out = run(&["ingest-stats", "--ngram", shard.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let stats: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let total = &stats["total"];
    // every line is accounted for exactly once
    let partition = total["lines_malformed"].as_u64().unwrap()
        + total["records_year_filtered"].as_u64().unwrap()
        + total["tokens_cleaned_away"].as_u64().unwrap()
        + total["contributing_lines"].as_u64().unwrap();
    assert_eq!(total["lines_read"].as_u64().unwrap(), partition);
    assert_eq!(stats["shards"].as_array().unwrap().len(), 1);
}

#[test]
fn coverage_formats_render() {
    let dir = tempfile::tempdir().unwrap();
    let list_path = dir.path().join("list.txt");
    std::fs::write(&list_path, "the\na\nalice\n").unwrap();
    for format in ["json", "tsv", "md"] {
        let out = run(&[
            "coverage",
            "--text",
            &alice(),
            "--list",
            list_path.to_str().unwrap(),
            "--format",
            format,
            "--no-timestamp",
        ]);
        assert_eq!(code(&out), 0, "format {format}");
        assert!(!out.stdout.is_empty());
    }
    // unknown format is a usage error
    let out = run(&[
        "coverage",
        "--text",
        &alice(),
        "--list",
        list_path.to_str().unwrap(),
        "--format",
        "xml",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn zipf_writes_curve_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("curve.csv");
    let out = run(&[
        "zipf",
        "--input",
        &alice(),
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["fit"]["r_squared"].as_f64().unwrap() > 0.9);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "rank,count,coverage,cum_coverage,log_rank,log_count"
    );
    let first = lines.next().unwrap();
    assert!(first.starts_with("1,"), "first data row is rank 1: {first}");
}

#[test]
fn replicate_emits_summary_and_swl() {
    let dir = tempfile::tempdir().unwrap();
    let swl_path = dir.path().join("swl.txt");
    let out = run(&[
        "replicate",
        "--input",
        &alice(),
        "--swl-output",
        swl_path.to_str().unwrap(),
        "--no-timestamp",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    for key in [
        "# total_tokens=",
        "# raw_vocabulary=",
        "# vocabulary=",
        "# swl_size=",
        "# threshold=",
    ] {
        assert!(text.contains(key), "missing {key} in:\n{text}");
    }
    assert!(swl_path.exists());
}

#[test]
fn data_dir_overrides_bundled_dictionary() {
    let dir = tempfile::tempdir().unwrap();
    // a dictionary that maps a frequent lowercase word to a marker lemma
    // nothing else produces
    std::fs::write(dir.path().join("lemmas_en.tsv"), "curious\tinquisitive\n").unwrap();
    let out = bin()
        .args(["swl", "--input", &alice(), "--threshold", "0.99"])
        .env("LEXICOV_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let list = String::from_utf8(out.stdout).unwrap();
    assert!(list.lines().any(|l| l == "inquisitive"), "override dictionary unused");

    // an explicit --lemma-dict beats the environment
    let plain = dir.path().join("noop.tsv");
    std::fs::write(&plain, "zzzz\tzzz\n").unwrap();
    let out = bin()
        .args([
            "swl",
            "--input",
            &alice(),
            "--threshold",
            "0.99",
            "--lemma-dict",
            plain.to_str().unwrap(),
        ])
        .env("LEXICOV_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let list = String::from_utf8(out.stdout).unwrap();
    assert!(!list.lines().any(|l| l == "inquisitive"));
}

#[test]
fn invalid_word_list_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("list.txt");
    std::fs::write(&bad, [0x80, 0x81]).unwrap();
    let out = run(&["coverage", "--text", &alice(), "--list", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}
