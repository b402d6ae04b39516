use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relattice")).args(args).output().unwrap()
}

fn u2_args<'a>(cmd: &'a str, u: &'a str, c: &'a str) -> Vec<&'a str> {
    vec![cmd, "-u", u, "-c", c]
}

fn stderr_line(o: &Output) -> String {
    let s = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(s.lines().count(), 1, "{s:?}");
    assert!(s.starts_with("error: "), "{s:?}");
    s
}

fn paths() -> (String, String) {
    (data("u2.json").display().to_string(), data("u2_catalog.json").display().to_string())
}

#[test]
fn eval_prints_relation_json() {
    let (u, c) = paths();
    let mut args = u2_args("eval", &u, &c);
    args.extend(["-e", "A + C"]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["header"], serde_json::json!(["x"]));
    assert_eq!(v["tuples"], serde_json::json!([["1"], ["2"]]));
}

#[test]
fn eval_table() {
    let (u, c) = paths();
    let mut args = u2_args("eval", &u, &c);
    args.extend(["-e", "A", "--table"]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains('x') && text.contains('a'), "{text}");
}

#[test]
fn rewrite_trace_lines_are_json() {
    let (u, c) = paths();
    let mut args = u2_args("rewrite", &u, &c);
    args.extend(["-e", "select(A * B, x=1)", "--trace"]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let last = lines.last().unwrap();
    assert_eq!(last["status"], "FIXED_POINT");
    assert_eq!(last["steps"].as_u64().unwrap() as usize, lines.len() - 1);
    for step in &lines[..lines.len() - 1] {
        for key in ["rule", "direction", "position", "before", "after"] {
            assert!(step.get(key).is_some(), "{step}");
        }
    }
}

#[test]
fn laws_hold_on_u2() {
    let (u, _) = paths();
    let o = run(&["laws", "-u", &u]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["verdict"], "HOLDS", "{line}");
        assert_eq!(v["mode"], "exhaustive");
    }
}

#[test]
fn enum_summary_and_dot() {
    let (u, _) = paths();
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("u2.dot");
    let o = run(&["enum", "-u", &u, "--dot", dot.to_str().unwrap(), "--check-sublattices"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["elements"], 26);
    assert!(v["nondistributive_triple"].is_array());
    assert!(v["sublattices"].as_array().unwrap().iter().all(|s| s["boolean"] == true));
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph"), "{text}");
}

#[test]
fn usage_errors_exit_1() {
    for args in [&["frobnicate"][..], &["eval"], &["rewrite", "-u", "x", "-c", "y", "-e", "A", "--budget", "0"]] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(stderr_line(&o).starts_with("error: usage: "));
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let (u, c) = paths();
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"attributes\": [}").unwrap();
    let bad = bad.display().to_string();
    let cases: Vec<Vec<&str>> = vec![
        vec!["eval", "-u", "/nonexistent/u.json", "-c", &c, "-e", "A"],
        vec!["eval", "-u", &bad, "-c", &c, "-e", "A"],
        vec!["eval", "-u", &u, "-c", &bad, "-e", "A"],
        vec!["eval", "-u", &u, "-c", &c, "-e", "A * (B"],
        vec!["rewrite", "-u", &u, "-c", &c, "-e", "project(A"],
    ];
    for args in cases {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        stderr_line(&o);
    }
}

#[test]
fn syntax_error_reports_location() {
    let (u, c) = paths();
    let o = run(&["eval", "-u", &u, "-c", &c, "-e", "A * * B"]);
    assert_eq!(o.status.code(), Some(2));
    let line = stderr_line(&o);
    assert!(line.starts_with("error: syntax: "), "{line}");
    assert!(line.contains("1:5") || line.contains("col"), "{line}");
}

#[test]
fn eval_errors_exit_4() {
    let (u, c) = paths();
    for e in ["Missing", "rename(A, x -> y)", "minus(A, B)", "divide(A, 01)"] {
        let o = run(&["eval", "-u", &u, "-c", &c, "-e", e]);
        assert_eq!(o.status.code(), Some(4), "{e}");
        assert!(stderr_line(&o).starts_with("error: eval: "));
    }
}

#[test]
fn output_is_deterministic() {
    let (u, c) = paths();
    let runs = [
        vec!["eval", "-u", &u, "-c", &c, "-e", "(A + B) * C"],
        vec!["rewrite", "-u", &u, "-c", &c, "-e", "(A + B) * (C + B)", "--strategy", "exhaustive", "--trace"],
        vec!["laws", "-u", &u, "--seed", "7"],
    ];
    for args in runs {
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.status, b.status);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
