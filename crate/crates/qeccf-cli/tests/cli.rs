use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

fn qeccf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qeccf"))
        .args(args)
        .env_remove("QECCF_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_then_diff_reports_table_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pairs.csv");
    let scn = data("scenarios/five_qubit_pairs.ini");
    let o = qeccf(&["run", scn.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 64);
    assert!(csv.contains("7,\"O2,I2\",Yes,Yes,2,1952,30,180,3"));

    let same = qeccf(&["diff", out.to_str().unwrap(), out.to_str().unwrap()]);
    assert_eq!(same.status.code(), Some(0));

    let golden = data("golden/five_qubit_pairs.csv");
    let d = qeccf(&["diff", out.to_str().unwrap(), golden.to_str().unwrap()]);
    assert_eq!(d.status.code(), Some(1));
    let text = stdout(&d);
    assert!(text.contains("MISMATCH: row 14 column dim"));
    assert!(text.contains("documented: row 63 column is_clifford"));
}

#[test]
fn thread_count_does_not_change_output() {
    let scn = data("scenarios/translate_sum.ini");
    let one = qeccf(&[
        "--threads",
        "1",
        "run",
        scn.to_str().unwrap(),
        "--format",
        "md",
    ]);
    let many = Command::new(env!("CARGO_BIN_EXE_qeccf"))
        .args(["run", scn.to_str().unwrap(), "--format", "md"])
        .env("QECCF_THREADS", "3")
        .output()
        .unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    let md = stdout(&one);
    assert_eq!(md.lines().count(), 2 + 63);
    assert!(md.contains("| (I2, I2) |"));
    assert!(md.contains("| n/a | n/a | n/a |"));
}

#[test]
fn decompose_and_detect() {
    let scn = data("scenarios/five_qubit_pairs.ini");
    let o = qeccf(&["decompose", scn.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("|E| = 2048, |S| = 128"));
    assert!(text.contains("16 constituents on C^32"));

    let o = qeccf(&["detect", scn.to_str().unwrap(), "--assignment", "O2,I2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("| 1 | (O2, I2) | Yes | Yes | 2 | 1952 | 30 | 180 | 3 | Yes |"));
}

#[test]
fn bad_input_fails_cleanly() {
    let scn = data("scenarios/five_qubit_pairs.ini");
    let o = qeccf(&["detect", scn.to_str().unwrap(), "--assignment", "PQ+,I2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown transform value"));
    let o = qeccf(&["run", "/nonexistent.ini"]);
    assert_eq!(o.status.code(), Some(1));
    let o = qeccf(&["run", scn.to_str().unwrap(), "--format", "xml"]);
    assert!(!o.status.success());
}
