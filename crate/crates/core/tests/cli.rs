use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dual-derham"));
    cmd.env_remove("DUAL_DERHAM_JOBS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn default_table_is_six_by_four() {
    let o = run(&["table", "--max-n", "7", "--rank", "2", "--format", "md"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| q")).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.matches("PASS").count() == 4));
    assert!(text.contains("| 4 | Z/2 ⊕ (Z/4)^2 PASS | Z/2 PASS | 0 PASS | 0 PASS |"));
}

#[test]
fn table_json_schema() {
    let o = run(&["table", "--max-n", "4", "--rank", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let first = &v[0];
    assert_eq!(first["cell"], serde_json::json!({"n": 2, "i": 0, "rank": 1}));
    assert_eq!(first["computed"], serde_json::json!({"free_rank": 0, "torsion": [2]}));
    assert_eq!(first["expected"], first["computed"]);
    assert_eq!(first["pass"], true);
}

#[test]
fn lemma_report() {
    let o = run(&["verify", "lemma", "--p", "2", "--max-n", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["computed"]["checked"], 780);
    assert_eq!(v[0]["computed"]["failed"], 0);
}

#[test]
fn csv_output_has_header() {
    let o = run(&["verify", "h0", "--max-n", "3", "--rank", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("check,cell,computed,expected,pass"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn jobs_and_seed_do_not_change_output() {
    let args = ["verify", "theorem", "--max-n", "6", "--rank", "2"];
    let a = run(&args);
    let b = bin().args(args).args(["--jobs", "3", "--seed", "17"]).output().unwrap();
    let c = bin().args(args).env("DUAL_DERHAM_JOBS", "2").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn caps_and_warnings() {
    assert_eq!(run(&["verify", "h0", "--max-n", "13"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "h0", "--rank", "7"]).status.code(), Some(2));
    let o = run(&["verify", "h0", "--max-n", "8", "--rank", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn snf_from_stdin_with_transforms() {
    let dir = tempfile::tempdir().unwrap();
    let mut child = bin()
        .args(["snf", "-", "--transforms", dir.path().to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"2 3\n2 4 4\n-6 6 12\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2 3\n2 0 0\n0 6 0\n");
    for name in ["U.txt", "D.txt", "V.txt"] {
        assert!(dir.path().join(name).exists());
    }
}

#[test]
fn snf_json_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, r#"{"rows":1,"cols":2,"data":[4,6]}"#).unwrap();
    let o = run(&["snf", path.to_str().unwrap(), "--matrix-format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["data"], serde_json::json!([2, 0]));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "3 3\n1 2\n").unwrap();
    assert_eq!(run(&["snf", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["snf", "/nonexistent/matrix.txt"]).status.code(), Some(2));
    assert_eq!(run(&["homology"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn homology_of_d_family_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["homology", "--family", "d", "--n", "3", "--rank", "2", "--degree", "0", "--format", "json", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["cell"]["family"], "D");
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify"));
}
