use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_supermoduli"));
    c.env("SUPERMODULI_NO_COLOR", "1");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn odd_puncture_count_is_a_usage_error() {
    let out = run(&["--nr", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_check_is_a_usage_error() {
    let out = run(&["--check", "nope", "--nr", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_reads_stdin() {
    let mut child = bin().arg("eval").stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(b"odd: a b\nb*a\n").unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert_eq!(text.trim(), "-a*b");
}

#[test]
fn stabilizer_with_fixture_gives_one_record() {
    let path = fixture("z6.susy");
    let out = run(&["--check", "stabilizer", "--nr", "6", "--susy", &path, "--format", "json-lines"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let records: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .filter(|v: &serde_json::Value| v.get("checkId").is_some())
        .collect();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["status"], "pass");
}

#[test]
fn reports_are_deterministic() {
    let args = ["--nr", "4,6", "--check", "euler,groups,gauge-fix", "--format", "json-lines"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn checks_lists_every_id() {
    let out = run(&["checks"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), supermoduli::cli::CHECKS.len());
}
