use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn towercoh(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_towercoh"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn towercoh");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const POINT_TOWER: &str = r#"{"schema": "towercoh/1", "tower": {
  "levels": [{"total": {"vertices": [0], "simplices": [[0]]}},
             {"total": {"vertices": [0, 1], "simplices": [[0], [1]]}}],
  "projections": [{"0": 0, "1": 0}],
  "deck_orders": [1, 2]}}"#;

#[test]
fn solenoid_first_limit_vanishes() {
    let o = towercoh(&["--generate", "solenoid", "--p", "2", "--r-max", "3", "--task", "tower-report", "--degree", "1"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("H̃¹ inferred: 0"), "{}", stdout(&o));
}

#[test]
fn solenoid_zeroth_limit_is_p_adic() {
    let o = towercoh(&["--generate", "solenoid", "--p", "3", "--r-max", "3", "--task", "tower-report", "--degree", "0"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("H̃⁰ inferred: Z_3"), "{}", stdout(&o));
}

#[test]
fn leray_on_triangle_boundary() {
    let o = towercoh(&["--generate", "cycle3", "--task", "leray", "--p", "3", "--s", "2"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("Čech = simplicial in degrees 0..2: PASS"), "{}", stdout(&o));
}

#[test]
fn pair_cohomology_of_disk_rel_boundary() {
    let o = towercoh(&["--generate", "disk-pair", "--p", "3", "--s", "2"], None);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("H^1(X, Z; Z/3^2) = 0"), "{out}");
    assert!(out.contains("H^2(X, Z; Z/3^2) = Z/3^2"), "{out}");
}

#[test]
fn tower_tasks_pass() {
    for args in [
        &["--generate", "voltage", "--p", "2", "--r-max", "2", "--s-max", "2", "--task", "theorem-check", "--absolute"][..],
        &["--generate", "cylinder-pair-tower", "--r-max", "2", "--s-max", "2", "--task", "les"][..],
        &["--generate", "interval-pair", "--task", "les", "--s", "2"][..],
        &["--generate", "trivial-circle", "--r-max", "2", "--task", "cohomology"][..],
    ] {
        let o = towercoh(args, None);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert!(!stdout(&o).contains("FAIL"), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn empty_stdin_is_a_parse_error() {
    let o = towercoh(&[], Some(""));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("empty document"), "{}", stderr(&o));
}

#[test]
fn malformed_json_reports_location() {
    let o = towercoh(&["-"], Some("{\"schema\": \"towercoh/1\",\n \"complex\": [}"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(towercoh(&["--generate", "cycle3", "--p", "4"], None).status.code(), Some(1));
    assert_eq!(towercoh(&["--generate", "cycle3", "--s", "0"], None).status.code(), Some(1));
    assert_eq!(towercoh(&["--task", "nonsense"], None).status.code(), Some(1));
    assert_eq!(towercoh(&["--help"], None).status.code(), Some(0));
}

#[test]
fn task_needing_a_tower_rejects_a_pair() {
    let o = towercoh(&["--generate", "cycle3", "--task", "tower-report"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_generator_is_invalid() {
    let o = towercoh(&["--generate", "nosuch"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nosuch"));
}

#[test]
fn tower_with_wrong_deck_order_is_invalid() {
    let ok = scratch("point_tower.json", POINT_TOWER);
    let o = towercoh(&[ok.to_str().unwrap(), "--task", "tower-report", "--degree", "0"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let bad = scratch("bad_point_tower.json", &POINT_TOWER.replace("[1, 2]", "[1, 3]"));
    let o = towercoh(&[bad.to_str().unwrap(), "--task", "tower-report"], None);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn unknown_field_is_rejected() {
    let text = r#"{"schema": "towercoh/1", "generator": {"kind": "point"}, "colour": "red"}"#;
    let o = towercoh(&[], Some(text));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--generate", "voltage", "--p", "3", "--r-max", "2", "--s-max", "2", "--task", "tower-report", "--format", "json"];
    let a = towercoh(&args, None);
    let b = towercoh(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["job"]["task"], "tower-report");
}

#[test]
fn echoed_document_reproduces_the_result() {
    for (name, task) in [("disk-pair", "les"), ("solenoid", "tower-report"), ("cylinder-pair-tower", "theorem-check")] {
        let args = ["--generate", name, "--r-max", "2", "--s-max", "2", "--task", task, "--format", "json"];
        let first: Value = serde_json::from_slice(&towercoh(&args, None).stdout).unwrap();
        let doc = serde_json::to_string(&first["job"]["input"]).unwrap();
        let path = scratch(&format!("echo_{name}.json"), &doc);
        let again = towercoh(
            &[path.to_str().unwrap(), "--r-max", "2", "--s-max", "2", "--task", task, "--format", "json"],
            None,
        );
        assert_eq!(again.status.code(), Some(0), "{name}: {}", stderr(&again));
        let again: Value = serde_json::from_slice(&again.stdout).unwrap();
        assert_eq!(first, again, "{name}");
    }
}
