use std::path::{Path, PathBuf};
use std::process::Command;

use mvkit::cli::report::ReportDoc;
use mvkit::rational::parse;
use serde_json::Value as Json;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn mvkit(args: &[&str]) -> (i32, ReportDoc) {
    let out = Command::new(env!("CARGO_BIN_EXE_mvkit"))
        .args(args)
        .output()
        .unwrap();
    let doc: ReportDoc = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), doc)
}

fn fx(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn check_accepts_valid_fixtures() {
    for f in [
        "L2.mv",
        "L5.mv",
        "L3xL3.mv",
        "T3.mv",
        "L3xL3_mod.mv",
        "G23.mv",
        "Q.mv",
    ] {
        let (code, doc) = mvkit(&["check", &fx(f)]);
        assert_eq!(code, 0, "{f}: {:?}", doc.results);
    }
}

#[test]
fn corrupt_table_exits_2_with_witness() {
    let (code, doc) = mvkit(&["check", &fx("L4_corrupt.mv")]);
    assert_eq!(code, 2);
    let err = doc.results["error"].as_str().unwrap();
    assert!(err.contains("(iii)") && err.contains("[1, 2]"), "{err}");
    assert!(doc.inputs[0].sha256.is_some());
}

#[test]
fn missing_file_and_bad_usage_exit_1() {
    let (code, doc) = mvkit(&["check", "/nonexistent/file.mv"]);
    assert_eq!(code, 1);
    assert!(doc.inputs[0].sha256.is_none());
    let out = Command::new(env!("CARGO_BIN_EXE_mvkit"))
        .arg("frobnicate")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ideal_dot_for_square() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("ideals.dot");
    let (code, doc) = mvkit(&["ideals", &fx("L3xL3.mv"), "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("[label=").count(), 4);
    assert_eq!(text.matches("->").count(), 4);
    assert!(doc.results.is_object());
}

#[test]
fn homs_between_chains() {
    let (code, doc) = mvkit(&["homs", &fx("L3.mv"), &fx("L5.mv")]);
    assert_eq!(code, 0);
    assert_eq!(doc.results["count"], 1);
    let (_, doc) = mvkit(&["homs", &fx("L4.mv"), &fx("L5.mv")]);
    assert_eq!(doc.results["count"], 0);
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let args = ["--out", out.to_str().unwrap(), "epicomplete", &fx("L4.mv")];
    let (code, first) = mvkit(&args);
    assert_eq!(code, 0);
    let (_, second) = mvkit(&args);
    assert_eq!(first.without_timing(), second.without_timing());
    let written: ReportDoc = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(written.without_timing(), second.without_timing());
}

#[test]
fn rationals_are_reparseable_strings() {
    let (code, doc) = mvkit(&["divisible", &fx("Q.mv"), "--target", "1/3", "--n", "4"]);
    assert_eq!(code, 0);
    let sol = doc.results["result"]["solution"].as_str().unwrap();
    assert_eq!(parse(sol).unwrap(), parse("1/12").unwrap());
    let (_, doc) = mvkit(&["chang", &fx("G23.mv")]);
    fn walk(j: &Json, strings: &mut Vec<String>) {
        match j {
            Json::String(s) => strings.push(s.clone()),
            Json::Array(v) => v.iter().for_each(|x| walk(x, strings)),
            Json::Object(m) => m.values().for_each(|x| walk(x, strings)),
            _ => {}
        }
    }
    let mut strings = Vec::new();
    walk(&doc.results, &mut strings);
    let numeric = |s: &&String| {
        s.contains('/')
            && s.chars()
                .all(|c| c.is_ascii_digit() || "/-(), ".contains(c))
    };
    let rationals: Vec<_> = strings.iter().filter(numeric).collect();
    assert!(rationals.len() >= 8, "{strings:?}");
    for s in rationals {
        for part in s.trim_matches(|c| c == '(' || c == ')').split(", ") {
            assert!(parse(part).is_ok(), "{s}");
        }
    }
}

#[test]
fn verify_uses_and_reuses_a_catalog_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("catalog");
    let args = [
        "verify",
        "--theorem",
        "2.3.1",
        "--catalog",
        cat.to_str().unwrap(),
    ];
    let (code, first) = mvkit(&args);
    assert_eq!(code, 0);
    assert!(cat.read_dir().unwrap().next().is_some());
    assert_eq!(first.results["tally"]["counterexample"], 0);
    let (_, second) = mvkit(&args);
    assert_eq!(first.results, second.results);
    let (code, _) = mvkit(&[
        "verify",
        "--theorem",
        "9.9",
        "--catalog",
        cat.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
}

#[test]
fn aext_reports_witnesses() {
    let (code, doc) = mvkit(&["aext", &fx("L3.mv"), &fx("L5.mv")]);
    assert_eq!(code, 0);
    assert!(doc.results.to_string().contains("witnesses"));
}
