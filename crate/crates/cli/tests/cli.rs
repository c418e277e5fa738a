use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frobscheme"))
}

fn run(args: &[&str]) -> Output {
    bin().env_remove("FROBSCHEME_THREADS").args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = args.to_vec();
    full.extend(["--out", path.to_str().unwrap()]);
    let out = run(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tcond_on_z9_passes() {
    let dir = TempDir::new().unwrap();
    let z9 = generate(dir.path(), "z9.json", &["gen", "frobenius", "--cyclic", "9", "--units", "-1"]);
    let out = run(&["check", "tcond", "--t", "4", "--scheme", s(&z9)]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["report"]["passed"], true);
}

#[test]
fn spread_schemes_are_algebraically_isomorphic_but_hall_fails_the_4_condition() {
    let dir = TempDir::new().unwrap();
    let des = generate(dir.path(), "des.json", &["gen", "spread", "--q", "9"]);
    let hall = generate(dir.path(), "hall.json", &["gen", "spread", "--q", "9", "--andre"]);
    let spec = generate(dir.path(), "spec.json", &["gen", "spread", "--q", "9", "--emit", "spec"]);

    let out = run(&["iso", "alg", s(&des), s(&hall)]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["report"]["isomorphisms"][0]["map"].as_array().unwrap().len(), 11);

    let out = run(&["check", "tcond", "--scheme", s(&hall)]);
    assert_eq!(code(&out), 3);
    let w = &report(&out)["report"]["witness"];
    assert_ne!(w["count1"], w["count2"]);

    let out = run(&["classify", "frobenius", "--scheme", s(&hall), "--reference", s(&spec)]);
    assert_eq!(code(&out), 3);
    assert_eq!(report(&out)["report"]["verdict"], "proper");
    let out = run(&["classify", "frobenius", "--scheme", s(&des), "--reference", s(&spec)]);
    assert_eq!(code(&out), 0);
}

#[test]
fn wl_verdicts() {
    let out = run(&["classify", "wl", "--n", "63", "--conn", "1,-1"]);
    assert_eq!(code(&out), 4);
    assert_eq!(report(&out)["report"]["outcome"]["verdict"], "exception_unresolved");
    let out = run(&["classify", "wl", "--n", "81", "--conn", "1,-1"]);
    assert_eq!(code(&out), 0);
    let out = run(&["classify", "wl", "--n", "105", "--conn", "1,2", "--units", "-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["report"]["outcome"]["verdict"], "exactly2");
}

#[test]
fn malformed_json_is_an_input_error_with_location() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 3,\n \"rank\": }").unwrap();
    let out = run(&["check", "tcond", "--scheme", s(&bad)]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2 column"), "{err}");

    std::fs::write(&bad, r#"{"n":2,"rank":2,"star":[0,1],"colors":[[0,1],[1,0]],"extra":1}"#).unwrap();
    assert_eq!(code(&run(&["check", "axioms", "--scheme", s(&bad)])), 2);
    assert_eq!(code(&run(&["check", "axioms", "--scheme", s(&dir.path().join("missing.json"))])), 2);
}

#[test]
fn axiom_violations_fail_with_a_certificate() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    // relation 1 is not symmetric but star says it is
    std::fs::write(&bad, r#"{"n":3,"rank":2,"star":[0,1],"colors":[[0,1,1],[2,0,1],[1,1,0]]}"#).unwrap();
    let out = run(&["check", "axioms", "--scheme", s(&bad)]);
    assert_eq!(code(&out), 3);
    std::fs::write(&bad, r#"{"n":3,"rank":3,"star":[0,2,1],"colors":[[0,1,2],[2,0,1],[1,2,0]]}"#).unwrap();
    assert_eq!(code(&run(&["check", "axioms", "--scheme", s(&bad)])), 0);
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let hall = generate(dir.path(), "hall.json", &["gen", "spread", "--q", "9", "--andre"]);
    let runs: Vec<Vec<u8>> = ["1", "2", "4"]
        .iter()
        .map(|t| run(&["--threads", t, "check", "tcond", "--scheme", s(&hall)]).stdout)
        .collect();
    assert!(runs.iter().all(|r| r == &runs[0]));
    let env = bin().env("FROBSCHEME_THREADS", "1").args(["check", "tcond", "--scheme", s(&hall)]).output().unwrap();
    assert_eq!(env.stdout, runs[0]);
}

#[test]
fn induced_isomorphism_between_relabelled_copies() {
    let dir = TempDir::new().unwrap();
    let z9 = generate(dir.path(), "z9.json", &["gen", "frobenius", "--cyclic", "9", "--units", "-1"]);
    for seed in ["0", "5"] {
        let out = run(&["iso", "induced", s(&z9), s(&z9), "--seed", seed]);
        assert_eq!(code(&out), 0);
        assert_eq!(report(&out)["report"]["verdict"]["verdict"], "induced");
    }
}

#[test]
fn schurity_and_separability() {
    let dir = TempDir::new().unwrap();
    let f3 = generate(dir.path(), "f3.json", &["gen", "spread", "--q", "3"]);
    let out = run(&["check", "schurity", "--scheme", s(&f3)]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["report"]["order"], "18");
    assert_eq!(code(&run(&["check", "separability", "--scheme", s(&f3)])), 0);
    assert_eq!(code(&run(&["check", "parabolics", "--scheme", s(&f3)])), 0);
    // primitive: Z7 with complement of order 3
    assert_eq!(code(&run(&["classify", "thm2", "--cyclic", "7", "--units", "2"])), 4);
}

#[test]
fn gen_outputs_round_trip() {
    let out = run(&["gen", "circulant", "--n", "8", "--conn", "1,-1", "--emit", "edges"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 16);
    let out = run(&["gen", "frobenius", "--cyclic", "7", "--units", "2", "--emit", "spec"]);
    let spec: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(spec["complement_order"], 3);
    assert_eq!(code(&run(&["gen", "frobenius", "--cyclic", "9", "--units", "3"])), 2);
}

#[test]
fn text_format_and_verify_paper() {
    let out = run(&["--format", "text", "verify-paper", "--only", "4,7"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
    assert!(text.ends_with("pass: 2/2 criteria pass\n"), "{text}");
    assert_eq!(code(&run(&["verify-paper", "--only", "12"])), 2);
}

#[test]
fn help_documents_the_formats() {
    let out = run(&["--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains(r#"{"n":<int>,"rank":<int>,"star":[<int>,...],"colors":[[<int>,...],...]}"#));
    assert!(text.contains(r#"{"kernel":[<factor>,...],"complement_order":<int>}"#));
    assert!(text.contains("EXIT CODES"));
}
