use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

fn vetgate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vetgate"))
        .args(args)
        .current_dir(fixtures())
        .env("VETGATE_NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn text_report_for_failing_column() {
    let o = vetgate(&["validate", "--schema", "ages.toml", "ages_missing.csv"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("age: Must not contain missing values, but found NA (element 2)"), "{text}");
    assert!(!text.contains('\u{1b}'), "no color when disabled");
}

#[test]
fn strict_mode_reports_unlisted_columns() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.toml"), "age = \"I+\"\n").unwrap();
    let schema = dir.path().join("s.toml");
    let data = fixtures().join("ages_ok.csv");
    let lax = vetgate(&["validate", "--schema", schema.to_str().unwrap(), data.to_str().unwrap()]);
    assert_eq!(lax.status.code(), Some(0));
    let strict = vetgate(&[
        "validate",
        "--schema",
        schema.to_str().unwrap(),
        data.to_str().unwrap(),
        "--strict",
        "--format",
        "json",
    ]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(stdout(&strict).contains("\"column\": \"name\""));
}

#[test]
fn missing_files_are_usage_errors() {
    let o = vetgate(&["validate", "--schema", "nope.toml", "ages_ok.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("vetgate: cannot read nope.toml"));
    assert_eq!(vetgate(&["validate", "--schema", "ages.toml", "nope.csv"]).status.code(), Some(2));
}

#[test]
fn bad_rule_shows_position() {
    let o = vetgate(&["rule", "--rule", "N+[0", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("at position 4"), "{err}");
    assert!(err.contains("    ^"), "{err}");
}

#[test]
fn rule_text_output_and_inference() {
    let o = vetgate(&["rule", "--rule", "I2[0,]", "3", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "Must be >= 0, but is -1 (element 2)\n");
    let o = vetgate(&["rule", "--rule", "b", "TRUE", "NA"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "Ok\n".to_owned()));
}

#[test]
fn unparsable_typed_value_is_usage_error() {
    let o = vetgate(&["rule", "--rule", "i", "--type", "int", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(vetgate(&[]).status.code(), Some(2));
    assert_eq!(vetgate(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(vetgate(&["bench", "--reps", "0"]).status.code(), Some(2));
    assert_eq!(vetgate(&["bench", "--scenario", "S9"]).status.code(), Some(2));
    assert_eq!(vetgate(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_writes_one_record_per_repetition() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("records.csv");
    let summary = dir.path().join("summary.csv");
    let o = vetgate(&[
        "bench",
        "--n",
        "1000",
        "--reps",
        "10",
        "--warmup",
        "1",
        "--out",
        out.to_str().unwrap(),
        "--summary-out",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let records = std::fs::read_to_string(&out).unwrap();
    let mut lines = records.lines();
    assert_eq!(lines.next(), Some("scenario,implementation,replication,elapsed_ns"));
    assert_eq!(lines.count(), 4 * 3 * 10);
    let summary = std::fs::read_to_string(&summary).unwrap();
    assert_eq!(summary.lines().next(), Some("scenario,implementation,min_ns,median_ns,mean_ns,max_ns"));
    assert_eq!(summary.lines().count(), 1 + 12);
    assert_eq!(stdout(&o), summary);
}

#[test]
fn bench_single_scenario() {
    let o = vetgate(&["bench", "--n", "100", "--reps", "3", "--scenario", "S4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 3);
    assert!(text.lines().skip(1).all(|l| l.starts_with("S4_long_na_first,")), "{text}");
}

#[test]
fn bench_unwritable_output_fails_before_timing() {
    let o = vetgate(&["bench", "--n", "100", "--reps", "1", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}
