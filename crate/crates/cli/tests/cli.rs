//! End-to-end checks of the binary: exit codes, output shapes, round
//! trips, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_reports_solvable_with_exit_zero() {
    let out = run(&["check", fixture("four-component-a.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("solvable: true"));
    assert!(text.contains("8 off the diagonal"));
    assert!(text.contains("(3-4#1, 3-4#2)"));
}

#[test]
fn check_json_is_machine_readable() {
    let out = run(&[
        "check",
        fixture("four-component-a.json").to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["solvable"], serde_json::json!(true));
    assert_eq!(value["sigma_off_diagonal"], serde_json::json!(8));
    assert_eq!(value["in_admissible_region"], serde_json::json!(true));
}

#[test]
fn asymmetric_matrix_exits_two_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"name":"bad","matrix":[[-2,1,1,0],[1,-5,3,1],[1,3,-6,-2],[0,1,2,-3]],"v":1,"q":[2,0,0,0],"e":["0","0","0","0"]}"#,
    )
    .unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("asymmetric"), "stderr was: {err}");
}

#[test]
fn resolve_search_and_verify_agree() {
    let doc = fixture("four-component-a.json");
    let out = run(&["resolve", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sequence: ({1},{1}), ({4},{4})"));

    let out = run(&[
        "resolve",
        doc.to_str().unwrap(),
        "--verify-only",
        fixture("four-component-a.steps.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("resolves minimally: true"));
}

#[test]
fn resolve_reports_search_exhaustion_distinctly() {
    // the locus needs two steps, so a zero-length cap must fail cleanly
    let out = run(&[
        "resolve",
        fixture("four-component-a.json").to_str().unwrap(),
        "--max-len",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("no minimal symmetric sequence within max length"));
}

#[test]
fn verify_only_rejects_non_minimal_sequences() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.json");
    // separates nothing near vertex 4, so the center misses locus pairs
    std::fs::write(&path, "[[[1],[1]]]").unwrap();
    let out = run(&[
        "resolve",
        fixture("four-component-a.json").to_str().unwrap(),
        "--verify-only",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("resolves minimally: false"));
}

#[test]
fn empty_sequence_verifies_on_the_second_fixture() {
    let out = run(&[
        "resolve",
        fixture("four-component-b.json").to_str().unwrap(),
        "--verify-only",
        fixture("four-component-b.steps.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("resolves minimally: true"));
}

#[test]
fn delta_values_and_index_errors() {
    let doc = fixture("banana.json");
    let out = run(&[
        "delta", doc.to_str().unwrap(), "--i", "2", "--k", "2", "--m", "1", "--n", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("delta(2,2,1,2) = -1"));
    assert!(stdout(&out).contains("w(2,2) = (0, 1)"));

    // equal vertices give zero, swapped first indices agree
    let out = run(&[
        "delta", doc.to_str().unwrap(), "--i", "1", "--k", "2", "--m", "1", "--n", "1",
    ]);
    assert!(stdout(&out).contains("= 0"));
    let a = run(&[
        "delta", doc.to_str().unwrap(), "--i", "1", "--k", "2", "--m", "1", "--n", "2",
    ]);
    let b = run(&[
        "delta", doc.to_str().unwrap(), "--i", "2", "--k", "1", "--m", "1", "--n", "2",
    ]);
    let first_line = |o: &Output| stdout(o).lines().next().unwrap().split('=').nth(1).unwrap().trim().to_string();
    assert_eq!(first_line(&a), first_line(&b));

    let out = run(&[
        "delta", doc.to_str().unwrap(), "--i", "3", "--k", "1", "--m", "1", "--n", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strata_single_point_grid() {
    let out = run(&[
        "strata",
        fixture("banana.json").to_str().unwrap(),
        "--denominator",
        "1",
        "--bound",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("signatures found: 1"));
}

#[test]
fn strata_banana_grid_has_multiple_rows() {
    let out = run(&[
        "strata",
        fixture("banana.json").to_str().unwrap(),
        "--denominator",
        "2",
        "--bound",
        "1",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(value["signatures"].as_array().unwrap().len() >= 2);
}

#[test]
fn scan_streams_records_and_repeats_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.jsonl");
    let out2 = dir.path().join("b.jsonl");
    let args = |path: &Path| {
        vec![
            "scan".to_string(),
            "--vertices".into(),
            "3".into(),
            "--max-edges".into(),
            "5".into(),
            "--count".into(),
            "50".into(),
            "--seed".into(),
            "42".into(),
            "--out".into(),
            path.to_str().unwrap().to_string(),
        ]
    };
    let run_owned = |args: Vec<String>| {
        Command::new(env!("CARGO_BIN_EXE_abelmap"))
            .args(args)
            .output()
            .unwrap()
    };
    let first = run_owned(args(&out1));
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let second = run_owned(args(&out2));
    assert_eq!(second.status.code(), Some(0));

    let strip = |path: &Path| -> Vec<String> {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|line| {
                let mut v: serde_json::Value = serde_json::from_str(line).unwrap();
                v.as_object_mut().unwrap().remove("micros");
                v.to_string()
            })
            .collect()
    };
    let a = strip(&out1);
    assert_eq!(a.len(), 50);
    assert_eq!(a, strip(&out2));

    // every line parses on its own and carries the inlined document
    for line in std::fs::read_to_string(&out1).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["doc"]["matrix"].is_array());
        assert!(v["solvable"].is_boolean());
    }
}

#[test]
fn scan_with_zero_count_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("empty.jsonl");
    let out = run(&[
        "scan", "--vertices", "2", "--max-edges", "3", "--count", "0", "--seed", "7", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), "");
}

#[test]
fn single_edge_document_has_diagonal_locus() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("edge.json");
    std::fs::write(
        &path,
        r#"{"name":"edge","matrix":[[-1,1],[1,-1]],"v":1,"q":[2,0],"e":["0","0"]}"#,
    )
    .unwrap();
    let out = run(&["check", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["solvable"], serde_json::json!(true));
    assert_eq!(value["sigma_off_diagonal"], serde_json::json!(0));
    assert_eq!(value["sigma"], serde_json::json!([["1-2", "1-2"]]));
}

#[test]
fn strata_resolve_reproduces_the_fixture_rows() {
    let out = run(&[
        "strata",
        fixture("four-component-a.json").to_str().unwrap(),
        "--denominator",
        "2",
        "--bound",
        "1",
        "--resolve",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = value["signatures"].as_array().unwrap();
    let row_for = |e: &[&str]| {
        rows.iter()
            .find(|row| {
                row["polarization"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_str().unwrap())
                    .collect::<Vec<_>>()
                    == e
            })
            .unwrap_or_else(|| panic!("no row for {e:?}"))
    };
    // the three worked polarizations appear, each solvable with the
    // expected resolution lengths
    let zero = row_for(&["0", "0", "0", "0"]);
    assert_eq!(zero["solvable"], serde_json::json!(true));
    assert_eq!(zero["sequence"].as_array().unwrap().len(), 2);
    let down = row_for(&["0", "-1/2", "0", "1/2"]);
    assert_eq!(down["sequence"].as_array().unwrap().len(), 2);
    let up = row_for(&["0", "1/2", "0", "-1/2"]);
    assert_eq!(up["sequence"].as_array().unwrap().len(), 1);
}

#[test]
fn five_cycle_reference_sequence_verifies() {
    let out = run(&[
        "resolve",
        fixture("cycle-5.json").to_str().unwrap(),
        "--verify-only",
        fixture("cycle-5.steps.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("resolves minimally: true"));
}

#[test]
fn canonical_round_trip_from_disk() {
    use abelmap_cli::document::AbelDataDocument;
    let doc = AbelDataDocument::load(&fixture("four-component-a.json")).unwrap();
    let canon = doc.canonical_json().unwrap();
    let text = serde_json::to_string_pretty(&canon).unwrap();
    let reparsed = AbelDataDocument::from_json(&text).unwrap();
    assert_eq!(reparsed.canonical_json().unwrap(), canon);
}
