use std::process::Command;

use pcakit::counters::CounterMachine;
use pcakit::dataword::DataWord;
use pcakit::samples::*;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pcakit")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn put(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_priority_binary() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["check-priority", &put(&dir, "c.txt", PROPERTY_CONDITION)]);
    assert_eq!(code, 0);
    assert!(out.contains("ordering: a b"));
    let (code, out, _) = run(&["check-priority", &put(&dir, "p.txt", SELF_PATTERN_CONDITION)]);
    assert_eq!(code, 1);
    assert!(out.contains("pattern"));
    let (code, _, err) = run(&["check-priority", &put(&dir, "x.txt", "states: q0\ntrans: q0 a\n")]);
    assert_eq!(code, 2);
    assert!(err.contains("line"));
}

#[test]
fn member_and_structured_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let pca = put(&dir, "p.txt", PROPERTY_PCA);
    let words = put(&dir, "w.txt", "a:1 b:2 a:1\na:1 a:1\na:1 b:1 a:1\n");
    let (code, out, _) = run(&["--format", "structured", "member", &pca, &words]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let verdicts: Vec<bool> = v["payload"]["results"].as_array().unwrap().iter().map(|r| r["accepted"].as_bool().unwrap()).collect();
    assert_eq!(verdicts, vec![true, false, false]);
    for r in v["payload"]["results"].as_array().unwrap() {
        DataWord::parse_line(r["word"].as_str().unwrap(), 1).unwrap();
    }
}

#[test]
fn compile_then_explore() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.txt").to_string_lossy().into_owned();
    let (code, text, _) = run(&["compile", &put(&dir, "p.txt", PROPERTY_PCA), "-o", &out]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("priority restriction: valid"));
    let machine = std::fs::read_to_string(&out).unwrap();
    CounterMachine::parse(&machine).unwrap();
    let (code, text, _) = run(&["explore", &out, "--max-len", "2", "--sum-bound", "8"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("witness: a\n"));

    let (code, text, _) = run(&["explore", &put(&dir, "anbn.txt", ANBN_MACHINE), "--max-len", "4"]);
    assert_eq!(code, 0);
    assert_eq!(text, "witness: a b\nwitness: a a b b\n");
}

#[test]
fn program_binary() {
    let dir = tempfile::tempdir().unwrap();
    let p = put(&dir, "prog.txt", PROPERTY_PROGRAM);
    let (code, text, _) = run(&["program", &p, "--target", "b3=true", "--max-len", "3"]);
    assert_eq!(code, 0);
    assert!(text.contains("witness: a:1 a:1"), "{text}");
    let q = put(&dir, "q.txt", "sigma: a\nfor i:=1 to length(A) do x := true");
    let (code, _, err) = run(&["program", &q, "--target", "x=true", "--path", "automaton"]);
    assert_eq!(code, 2);
    assert!(err.contains("restricted ND2"));
    let (code, _, _) = run(&["explore"]);
    assert_eq!(code, 2);
}
