use std::process::Command;

use qdirac::cli::{emit, parse, run, Format, RunConfig, EXIT_CONFIG};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qdirac"))
}

fn small(scenario: &str) -> RunConfig {
    RunConfig { scenario: scenario.into(), window: 4, ..RunConfig::default() }
}

#[test]
fn json_output_is_deterministic_apart_from_timings() {
    let a = run(&small("q-sl2")).unwrap().without_timings();
    let b = run(&small("q-sl2")).unwrap().without_timings();
    assert_eq!(emit(&a, Format::Json), emit(&b, Format::Json));
}

#[test]
fn reports_round_trip_in_both_formats() {
    let r = run(&small("classical-sl2")).unwrap();
    for f in [Format::Json, Format::Markdown] {
        assert_eq!(parse(&emit(&r, f), f).unwrap(), r);
    }
}

#[test]
fn binary_writes_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = bin().args(["-n", "4", "--suite", "exchange,dirac", "-o"]).arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let r = parse(&std::fs::read_to_string(&out).unwrap(), Format::Json).unwrap();
    assert_eq!(r.window, 4);
    assert!(r.find("exchange.psi-phi").is_some());
    assert!(r.find("dirac.matrix.11").is_some());
    assert!(r.find("reduce.q-sl2.antisymmetry").is_none());
}

#[test]
fn markdown_to_stdout() {
    let out = bin().args(["-n", "3", "--suite", "exchange", "--format", "markdown"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# Verification report"));
    assert_eq!(parse(&text, Format::Markdown).unwrap().scenario, "q-sl2");
}

#[test]
fn configuration_errors_exit_two() {
    for args in [&["--scenario", "su3"][..], &["-n", "0"], &["--order", "-1"], &["--suite", "nope"]] {
        let out = bin().args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(EXIT_CONFIG), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn unwritable_output_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("r.json");
    let status = bin().args(["-n", "2", "--suite", "exchange", "-o"]).arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_CONFIG));
}
