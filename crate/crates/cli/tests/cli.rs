//! Binary-level tests for argument plumbing: input selection, overrides,
//! and the exit-code convention. The row logic itself is unit-tested in
//! the command module; the acceptance suite covers determinism and the
//! rejection diagnostics.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_finslerab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn model_path(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name);
    path.to_str().unwrap().to_string()
}

#[test]
fn a_model_source_is_required_and_unique() {
    let out = run(&["check"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--model FILE or --catalog NAME"), "{err}");

    let out = run(&[
        "--model",
        &model_path("su2_riemannian.model"),
        "--catalog",
        "su2",
        "check",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("mutually exclusive"), "{err}");

    let out = run(&["--catalog", "su9", "check"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn override_specs_are_validated() {
    let bad: &[&[&str]] = &[
        &["--catalog", "su2", "--phi", "exp", "check"],
        &["--catalog", "su2", "--metric", "diag:1,2", "check"],
        &["--catalog", "su2", "--metric", "rows:1 0|0", "check"],
        &["--catalog", "su2", "--x", "e1 + e9", "check"],
        &["--catalog", "su2", "--tol", "0", "check"],
    ];
    for args in bad {
        let out = bin().args(*args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{args:?} should be rejected");
        assert!(!out.stderr.is_empty(), "{args:?} left stderr empty");
    }
}

#[test]
fn overrides_are_revalidated_as_a_whole() {
    // Each flag is fine alone; together the drift norm reaches the randers
    // bound.
    let out = run(&["--catalog", "su2", "--phi", "randers", "--x", "2*e1", "check"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("strictly below b0"), "{err}");

    let out = run(&["--catalog", "su2", "--phi", "randers", "--x", "0.5*e1", "check"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn informational_failures_do_not_change_the_exit_code() {
    // The Heisenberg round form is not bi-invariant; check reports the row
    // as FAIL but the command itself ran fine.
    let out = run(&["--catalog", "heis3", "--format", "csv", "check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let skew = text.lines().find(|l| l.starts_with("ad_skew")).unwrap();
    assert!(skew.ends_with("FAIL"), "{skew}");
}

#[test]
fn gv_test_runs_the_two_criteria_independently() {
    // The rows answer different questions: the riemannian one about the
    // round form alone (plane y3 = 0 plus the axis), the finsler one about
    // the drifted metric (cone y3 = -|y|/2 plus the axis).
    let model = model_path("heis3_randers.model");
    let cases: &[(&str, &str, &str)] = &[
        ("0.8660254037844386, 0, -0.5", "NotGeodesic", "Geodesic"),
        ("e1", "Geodesic", "NotGeodesic"),
        ("0.6, -0.8, -0.5", "NotGeodesic", "NotGeodesic"),
    ];
    for (vector, riemannian, finsler) in cases {
        let out = run(&["--model", &model, "gv", "test", vector]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        let row = |id: &str| text.lines().find(|l| l.starts_with(id)).unwrap().to_string();
        assert!(
            row("gv_riemannian").contains(&format!("verdict={riemannian}")),
            "{vector}: {text}"
        );
        assert!(
            row("gv_finsler").contains(&format!("verdict={finsler}")),
            "{vector}: {text}"
        );
    }
}

#[test]
fn a_closed_pipe_is_not_an_error() {
    use std::io::{BufRead, BufReader};
    // gv find emits a few hundred kilobytes here, far past the pipe buffer;
    // reading one line and hanging up must not crash the writer.
    let mut child = bin()
        .args([
            "--catalog",
            "heis3",
            "gv",
            "find",
            "--mode",
            "riemannian",
            "--resolution",
            "4000",
        ])
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    let stdout = child.stdout.take().unwrap();
    let mut first = String::new();
    BufReader::new(stdout).read_line(&mut first).unwrap();
    // dropping the reader closed the pipe
    assert!(first.starts_with("test_id"), "{first}");
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(0), "{status:?}");
}

#[test]
fn dump_reflects_overrides_in_canonical_form() {
    let out = run(&["--catalog", "heis3", "--phi", "randers", "--x", "0.5*e3", "dump"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bracket e1 e2 = e3"), "{text}");
    assert!(text.contains("phi = randers"), "{text}");
    assert!(text.contains("x = 0, 0, 0.5"), "{text}");
}
