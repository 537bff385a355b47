use std::path::PathBuf;
use std::process::{Command, Output};

use minc::model::{load_model, save_model, team_to_json};
use minc::sat::{bounded_sat_minc, SearchOptions};
use minc::{parse_minc, Semantics};
use serde_json::Value;

const FORK: &str = r#"{"worlds": ["w", "u", "v"],
  "relations": {"R": [["w", "u"], ["w", "v"]]},
  "valuation": {"p": ["u"], "q": ["v"]}}"#;

fn minc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minc"))
        .args(args)
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    minc(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(minc(args).stdout).unwrap()
}

fn file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn fork_separates_semantics() {
    let dir = tempfile::tempdir().unwrap();
    let m = file(&dir, "fork.json", FORK);
    assert_eq!(
        code(&["eval", "--semantics", "lax", &m, r#"["w"]"#, "dia (q <= p)"]),
        0
    );
    assert_eq!(
        code(&["eval", "--semantics", "strict", &m, "w", "dia (q <= p)"]),
        1
    );
    assert_eq!(
        code(&["eval", "--semantics", "kripke", &m, "u,v", "p | q"]),
        0
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&["sat", "--logic", "minc-lax", "--max-size", "1", "p & !p"]),
        1
    );
    assert_eq!(
        code(&["sat", "--logic", "minc-strict", "--max-size", "1", "p"]),
        0
    );
    assert_eq!(code(&["parse", "p & ("]), 2);
    assert_eq!(code(&["sat", "--logic", "nonsense", "p"]), 2);
    let budget = [
        "sat",
        "--logic",
        "minc-lax",
        "--budget",
        "5",
        "dia (q <= p) & box (p & !p)",
    ];
    let out = minc(&budget);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("budget"));
    assert_eq!(code(&["sat", "--logic", "L", "<E>p & [E]!p"]), 1);
    assert_eq!(code(&["sat", "--logic", "fo2c", "exists x p(x)"]), 0);
}

#[test]
fn sat_matches_library() {
    let f = "dia (q <= p) & box (p | q)";
    let out: Value = serde_json::from_str(&stdout(&[
        "--json",
        "sat",
        "--logic",
        "minc-lax",
        "--witness",
        "--jobs",
        "2",
        f,
    ]))
    .unwrap();
    let (m, t) = bounded_sat_minc(
        &parse_minc(f).unwrap(),
        Semantics::Lax,
        &SearchOptions::new(3),
    )
    .unwrap()
    .unwrap();
    let cli_model = load_model(&out["model"].to_string()).unwrap();
    assert_eq!(save_model(&cli_model), save_model(&m));
    assert_eq!(out["team"], team_to_json(&m, t));
}

#[test]
fn translations_and_reductions() {
    assert_eq!(
        stdout(&["translate", "lax", "p"]).trim(),
        "(sub0 & [E](sub0 -> p))"
    );
    let dir = tempfile::tempdir().unwrap();
    let c = file(&dir, "c.txt", "g1 = IN\ng2 = IN\ng3 = IN\ng4 = OR g1 g2\n");
    let expand: Value = serde_json::from_str(&stdout(&["--json", "reduce", "expand", &c])).unwrap();
    assert_eq!(expand["positive"], Value::Bool(true));
    assert_eq!(code(&["reduce", "phi-c", "--witness", &c]), 0);
    let d = "forall p forall q exists r (dep(q; r) & (r | !r))";
    assert_eq!(
        stdout(&["reduce", "dqbf-iqbf", d]).trim(),
        "forall p forall q exists r (forall s (s q r <= p q r) & (r | !r))"
    );
    assert_eq!(code(&["reduce", "ladner", "--check", "exists r1 r1"]), 0);
    assert_eq!(code(&["reduce", "ladner", "--check", "forall r1 r1"]), 1);
}

#[test]
fn machine_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let atm = file(
        &dir,
        "m.json",
        r#"{"states": ["acc"], "types": {"acc": "accept"}, "initial": "acc",
            "delta": [], "space": {"1": 1}}"#,
    );
    let out: Value =
        serde_json::from_str(&stdout(&["--json", "reduce", "atm-circuit", &atm, "1"])).unwrap();
    assert_eq!(out["l"], 3);
    assert_eq!(code(&["reduce", "atm-circuit", &atm, "2"]), 2);
}

#[test]
fn suites() {
    assert_eq!(code(&["suite", "divergence"]), 0);
    assert_eq!(code(&["suite", "nope"]), 2);
}
