//! End-to-end tests of the `tworep` binary: exit codes, output shape, and
//! the classify -> homcat index round trip.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tworep"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn tworep")
}

fn write_spec(contents: &str) -> NamedTempFile {
    let mut file = tempfile::Builder::new()
        .suffix(".toml")
        .tempfile()
        .expect("create temp file");
    file.write_all(contents.as_bytes()).expect("write spec");
    file
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

const NEGATION: &str = r#"
scalar_order = 4

[pi0]
kind = "cyclic"
parameter = 2

[pi1]
cyclic_factors = [4]

[[action.generators]]
element = 1
matrix = [[3]]
"#;

const POINT: &str = r#"
scalar_order = 1

[pi0]
kind = "cyclic"
parameter = 1

[pi1]
cyclic_factors = []
"#;

fn shipped_specs() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("read specs directory")
        .map(|entry| entry.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    paths.sort();
    assert!(!paths.is_empty(), "no shipped sample inputs found");
    paths
}

#[test]
fn every_shipped_sample_validates() {
    for path in shipped_specs() {
        let out = run(&["validate", path.to_str().unwrap()]);
        assert!(
            out.status.success(),
            "{} failed: {}",
            path.display(),
            stderr(&out)
        );
        let text = stdout(&out);
        assert!(text.starts_with("valid:"), "unexpected report: {text}");
        for check in [
            "group-axioms",
            "module-action",
            "associator-normalized",
            "associator-closed",
        ] {
            assert!(text.contains(check), "missing {check} line in: {text}");
        }
    }
}

#[test]
fn validate_reports_the_structure() {
    let spec = write_spec(NEGATION);
    let out = run(&["validate", spec.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("pi0 cyclic(2) of order 2"));
    assert!(text.contains("pi1 Z/4"));
    assert!(text.contains("associator zero"));
    assert!(text.contains("scalar order 4"));
}

#[test]
fn malformed_input_exits_2() {
    let spec = write_spec("this is { not toml");
    let out = run(&["validate", spec.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error"));
}

#[test]
fn unknown_fields_exit_2() {
    let spec = write_spec("scalar_order = 2\nbogus = 1\n[pi0]\nkind = \"cyclic\"\nparameter = 2\n[pi1]\ncyclic_factors = []\n");
    let out = run(&["validate", spec.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["validate", "/nonexistent/input.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn open_associator_exits_3_and_names_a_tuple() {
    // Over Z/4 objects the single entry at (1,1,1) has a nonvanishing
    // coboundary, so this input must be rejected as not closed.
    let spec = write_spec(
        r#"
scalar_order = 2

[pi0]
kind = "cyclic"
parameter = 4

[pi1]
cyclic_factors = [2]

[[alpha.entries]]
triple = [1, 1, 1]
value = [1]
"#,
    );
    let out = run(&["validate", spec.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("associator-closed"), "got: {err}");
    assert!(err.contains("(1, 1, 1, 2)"), "no failing tuple in: {err}");
}

#[test]
fn identity_touching_associator_entry_exits_3() {
    let spec = write_spec(
        r#"
scalar_order = 2

[pi0]
kind = "cyclic"
parameter = 2

[pi1]
cyclic_factors = [2]

[[alpha.entries]]
triple = [0, 1, 1]
value = [1]
"#,
    );
    let out = run(&["validate", spec.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("associator-normalized"));
}

#[test]
fn inconsistent_generator_action_exits_3() {
    // The generator of Z/2 squares to the identity, but negation mod 5
    // does not.
    let spec = write_spec(
        r#"
scalar_order = 2

[pi0]
kind = "cyclic"
parameter = 2

[pi1]
cyclic_factors = [5]

[[action.generators]]
element = 1
matrix = [[2]]
"#,
    );
    let out = run(&["validate", spec.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("module-action"));
}

#[test]
fn group_cap_exits_4() {
    let spec = write_spec(
        r#"
scalar_order = 4

[pi0]
kind = "symmetric"
parameter = 3

[pi1]
cyclic_factors = []
"#,
    );
    let out = bin()
        .args(["validate", spec.path().to_str().unwrap()])
        .env("TWOREP_MAX_GROUP", "4")
        .output()
        .expect("spawn tworep");
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("computation limit exceeded"));
}

#[test]
fn dimension_cap_exits_4() {
    let spec = write_spec(NEGATION);
    let out = bin()
        .args([
            "classify",
            spec.path().to_str().unwrap(),
            "--max-dim",
            "3",
        ])
        .env("TWOREP_MAX_DIM", "2")
        .output()
        .expect("spawn tworep");
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn classify_point_has_one_class_per_dimension() {
    // Over the one-point structure with scalar order 1 every dimension
    // carries exactly one class, plus the zero class.
    let spec = write_spec(POINT);
    let out = run(&[
        "classify",
        spec.path().to_str().unwrap(),
        "--max-dim",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .collect();
    assert_eq!(rows.len(), 3, "expected 3 classes in:\n{text}");
    assert!(rows[0].starts_with("0     0"));
    assert!(rows[1].starts_with("1     1"));
    assert!(rows[2].starts_with("2     2"));
}

#[test]
fn all_mode_refines_canonical_mode() {
    // Canonical mode lists one cochain per scalar part, so every class it
    // shows reappears in all mode, which additionally separates
    // inequivalent cochain classes over the same scalar part.
    let spec = write_spec(NEGATION);
    let path = spec.path().to_str().unwrap().to_string();
    let canonical = run(&["classify", &path, "--max-dim", "1", "--format", "json"]);
    let all = run(&["classify", &path, "--max-dim", "1", "--mode", "all", "--format", "json"]);
    assert!(canonical.status.success() && all.status.success());
    let parse = |out: &Output| -> serde_json::Value {
        serde_json::from_str(&stdout(out)).expect("json output")
    };
    let (c, a) = (parse(&canonical), parse(&all));
    let (c_len, a_len) = (
        c["classes"].as_array().unwrap().len(),
        a["classes"].as_array().unwrap().len(),
    );
    assert!(c_len <= a_len, "canonical {c_len} > all {a_len}");
    assert_eq!(c_len, 3, "zero class plus two scalar parts");
    assert_eq!(a_len, 5, "zero class plus two scalar parts times two cochain classes");
    assert_eq!(c["mode"], "canonical");
    assert_eq!(a["mode"], "all");
}

#[test]
fn classify_output_feeds_homcat() {
    let spec = write_spec(NEGATION);
    let path = spec.path().to_str().unwrap().to_string();
    let out = run(&["classify", &path, "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json output");
    let classes = doc["classes"].as_array().expect("classes array");
    assert!(classes.len() >= 3);
    for class in classes {
        let idx = class["index"].as_u64().unwrap().to_string();
        let hom = run(&[
            "homcat", &path, "--source", &idx, "--target", &idx, "--format", "json",
        ]);
        assert!(hom.status.success(), "index {idx}: {}", stderr(&hom));
        let summary: serde_json::Value =
            serde_json::from_str(&stdout(&hom)).expect("homcat json");
        assert_eq!(summary["source"].as_u64().unwrap().to_string(), idx);
        assert_eq!(summary["target"].as_u64().unwrap().to_string(), idx);
    }
}

#[test]
fn homcat_index_out_of_range_exits_3() {
    let spec = write_spec(NEGATION);
    let out = run(&[
        "homcat",
        spec.path().to_str().unwrap(),
        "--source",
        "99",
        "--target",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("out of range"));
}

#[test]
fn homcat_between_different_characters_is_terminal() {
    // Classes 1 and 2 of the negation example are one-dimensional with
    // distinct central characters, so only the zero morphism connects them.
    let spec = write_spec(NEGATION);
    let path = spec.path().to_str().unwrap().to_string();
    let cross = run(&["homcat", &path, "--source", "1", "--target", "2"]);
    assert!(cross.status.success());
    assert!(stdout(&cross).contains("terminal: yes"));
    let endo = run(&["homcat", &path, "--source", "1", "--target", "1"]);
    assert!(endo.status.success());
    let text = stdout(&endo);
    assert!(text.contains("terminal: no"));
    assert!(text.contains("equivalent to Rep(pi0)"));
}

#[test]
fn selftest_is_reproducible_and_passes() {
    let first = run(&["selftest", "--seed", "11"]);
    let second = run(&["selftest", "--seed", "11"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.contains("result: PASS"));
    assert!(text.contains("two-matrix-axioms"));
    assert!(text.contains("intertwiner-laws"));
}
