use std::path::PathBuf;
use std::process::{Command, Output};

use relcon::io::Json;
use relcon::FiniteRelation;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn relcon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relcon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn load(name: &str) -> FiniteRelation {
    FiniteRelation::from_json(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

#[test]
fn compose_worked_example() {
    let o = relcon(&["rel", "compose", &path("tau.json"), &path("sigma.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        r#"{"src": ["a1","a2"], "dst": ["c1","c2","c3"], "pairs": [[0,0],[0,2],[1,2]]}"#
    );
    let text = relcon(&[
        "--format",
        "text",
        "rel",
        "compose",
        &path("tau.json"),
        &path("sigma.json"),
    ]);
    assert_eq!(
        stdout(&text),
        "[a1, a2] -> [c1, c2, c3] {a1->c1, a1->c3, a2->c3}"
    );
}

#[test]
fn compose_mismatch_names_labels() {
    let o = relcon(&["rel", "compose", &path("sigma.json"), &path("tau.json")]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("boundary mismatch") && err.contains("c1"),
        "{err}"
    );
}

#[test]
fn generators_for_two_by_one() {
    let o = relcon(&[
        "--format",
        "json",
        "rel",
        "generators",
        &path("two_by_one.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let gens = v.as_array().unwrap();
    assert_eq!(gens.len(), 2);
    let pairs: Vec<&Value> = gens.iter().map(|g| &g["pairs"]).collect();
    assert_eq!(pairs[0], &serde_json::json!([[1, 0]]));
    assert_eq!(pairs[1], &serde_json::json!([[0, 0]]));
}

#[test]
fn meet_with_itself_and_converse() {
    let tau = std::fs::read_to_string(data("tau.json")).unwrap();
    let o = relcon(&[
        "--format",
        "json",
        "rel",
        "meet",
        &path("tau.json"),
        &path("tau.json"),
    ]);
    assert_eq!(stdout(&o), tau.trim_end());
    let c = relcon(&["--format", "json", "rel", "converse", &path("tau.json")]);
    let back = FiniteRelation::from_json(&stdout(&c)).unwrap();
    assert_eq!(back.converse(), load("tau.json"));
}

#[test]
fn parity_meet_fails_at_the_channel_node() {
    let o = relcon(&["check", &path("parity_meet.json")]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("circuit.seq[0] (pair `xor`)"), "{err}");
    assert!(
        err.contains("joint output [B1, B2] depends on input A"),
        "{err}"
    );

    let ok = relcon(&["check", &path("parity_s1.json")]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
}

#[test]
fn composite_constraint_matches_relcat_fold() {
    let o = relcon(&["--format", "json", "check", &path("sectorial_seq.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let printed = FiniteRelation::from_value(&v["constraint"]).unwrap();
    let folded = load("sigma.json").compose(&load("tau.json")).unwrap();
    assert_eq!(printed, folded);
    assert_eq!(v["leaves"], 2);
}

#[test]
fn identity_circuit_prints_identity() {
    let o = relcon(&["check", &path("identity.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o)
        .contains(r#"constraint: {"src": ["x","y"], "dst": ["x","y"], "pairs": [[0,0],[1,1]]}"#));
}

#[test]
fn outputs_reload() {
    for op in ["compose", "meet"] {
        let o = relcon(&["rel", op, &path("tau.json")]);
        let r = FiniteRelation::from_json(&stdout(&o)).unwrap();
        assert_eq!(r, load("tau.json"));
        assert_eq!(r.to_json(), stdout(&o));
    }
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(
        relcon(&["check", &path("broken.json")]).status.code(),
        Some(2)
    );
    assert_eq!(
        relcon(&["check", &path("missing.json")]).status.code(),
        Some(2)
    );
    assert_eq!(
        relcon(&["oracle", "laxity", "--cap", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(relcon(&["oracle", "nope"]).status.code(), Some(2));
}

#[test]
fn oracle_reports_the_expected_witness() {
    let o = relcon(&[
        "--format",
        "json",
        "oracle",
        "intersectability",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 7);
    assert!(v["expected_witness"]
        .as_str()
        .unwrap()
        .contains("depends on input A"));

    let again = relcon(&[
        "--format",
        "json",
        "oracle",
        "intersectability",
        "--seed",
        "7",
    ]);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn small_oracle_suites_pass() {
    let o = relcon(&["--format", "json", "oracle", "laxity"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["cases"].as_u64().unwrap() >= 10_000);
    let csp = relcon(&["oracle", "csp", "--size", "2"]);
    assert_eq!(csp.status.code(), Some(0), "{}", stderr(&csp));
    assert!(stdout(&csp).contains("PASS"));
}
