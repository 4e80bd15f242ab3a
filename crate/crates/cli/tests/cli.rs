use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn redlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_redlab"))
        .args(args)
        .env_remove("REDLAB_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const ZERO: &str = r#"{"space":"X0"}"#;
const CONST5: &str = r#"{"space":"X0","prefix":[],"tail":{"constant":5}}"#;

#[test]
fn gen_params_exit_codes() {
    let ok = redlab(&[
        "gen-params",
        "--flavor",
        "lp",
        "--base-p",
        "1.0",
        "--n-max",
        "4",
    ]);
    assert_eq!(code(&ok), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v["p_seq"].as_array().unwrap().len(), 4);
    assert_eq!(v["flavor"], "lp");

    let infeasible = redlab(&[
        "gen-params",
        "--base-p",
        "1.99",
        "--n-max",
        "12",
        "--margin",
        "0.9",
    ]);
    assert_eq!(code(&infeasible), 2);
    assert!(String::from_utf8_lossy(&infeasible.stderr).contains("exponent_in_range"));

    assert_eq!(code(&redlab(&["gen-params", "--base-p", "0.5"])), 1);
    assert_eq!(code(&redlab(&["no-such-command"])), 1);
    assert_eq!(code(&redlab(&["--help"])), 0);
}

#[test]
fn decide_reports_witness_and_unrelatedness() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (write(&dir, "a.json", ZERO), write(&dir, "b.json", CONST5));
    let out = redlab(&["decide", "--relation", "H0", s(&a), s(&b)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), r#"{"related":true,"witness":5}"#);

    let sloped = write(
        &dir,
        "c.json",
        r#"{"space":"X0","tail":{"affine":{"num":1,"den":2}}}"#,
    );
    assert_eq!(
        code(&redlab(&["decide", "--relation", "H0", s(&a), s(&sloped)])),
        3
    );

    let pool = |vals: &str| format!(r#"{{"space":"Pomega","values":[{vals}]}}"#);
    let x = write(
        &dir,
        "x.json",
        &pool(r#"{"num":3,"den":2},{"num":5,"den":4}"#),
    );
    let y = write(
        &dir,
        "y.json",
        &pool(r#"{"num":5,"den":4},{"num":3,"den":2},{"num":3,"den":2}"#),
    );
    let z = write(&dir, "z.json", &pool(r#"{"num":7,"den":4}"#));
    assert_eq!(
        code(&redlab(&["decide", "--relation", "=+", s(&x), s(&y)])),
        0
    );
    assert_eq!(
        code(&redlab(&["decide", "--relation", "=+", s(&x), s(&z)])),
        3
    );

    let garbage = write(&dir, "g.json", "not json");
    assert_eq!(
        code(&redlab(&["decide", "--relation", "H0", s(&a), s(&garbage)])),
        1
    );
    assert_eq!(
        code(&redlab(&["decide", "--relation", "E0", s(&a), s(&x)])),
        1
    );
}

#[test]
fn product_relations_decide_componentwise() {
    let dir = TempDir::new().unwrap();
    let pair = |x0: &str, vals: &str| {
        format!(r#"{{"first":{x0},"second":{{"space":"Pomega","values":[{vals}]}}}}"#)
    };
    let a = write(&dir, "a.json", &pair(ZERO, r#"{"num":3,"den":2}"#));
    let b = write(&dir, "b.json", &pair(CONST5, r#"{"num":3,"den":2}"#));
    let c = write(&dir, "c.json", &pair(CONST5, r#"{"num":7,"den":4}"#));
    let out = redlab(&["decide", "--relation", "H0x=+", s(&a), s(&b)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        code(&redlab(&["decide", "--relation", "H0x=+", s(&a), s(&c)])),
        3
    );
}

#[test]
fn reduce_emits_descriptors() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", CONST5);
    let out = redlab(&["reduce", "--map", "lp", "--n-max", "5", s(&a)]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outer"]["type"], "lp");
    assert_eq!(v["blocks"].as_array().unwrap().len(), 5);

    let c0 = redlab(&["reduce", "--map", "c0", "--n-max", "3", s(&a)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&c0)).unwrap();
    assert_eq!(v["outer"]["type"], "c0");

    let b = write(
        &dir,
        "b.json",
        r#"{"space":"Pomega","values":[{"num":3,"den":2}]}"#,
    );
    assert_eq!(
        code(&redlab(&[
            "reduce",
            "--map",
            "Lp",
            "--base-p",
            "1.25",
            s(&b)
        ])),
        0
    );
    assert_eq!(
        code(&redlab(&[
            "reduce",
            "--map",
            "h",
            "--base-p",
            "1.25",
            s(&a),
            s(&b)
        ])),
        0
    );
}

#[test]
fn corrupted_schedule_is_rejected() {
    let dir = TempDir::new().unwrap();
    let good = redlab(&["gen-params", "--base-p", "1.0", "--n-max", "4"]);
    let mut v: serde_json::Value = serde_json::from_str(&stdout(&good)).unwrap();
    v["p_seq"][1] = serde_json::json!(1.999);
    let sched = write(&dir, "s.json", &v.to_string());
    let a = write(&dir, "a.json", ZERO);
    let out = redlab(&["reduce", "--map", "lp", "--schedule", s(&sched), s(&a)]);
    assert_eq!(code(&out), 2);
    let out = redlab(&[
        "verify",
        "--suite",
        "lemma21",
        "--schedule",
        s(&sched),
        "--cases",
        "2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("one.csv");
    let run = |extra: &[&str], env_seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_redlab"));
        cmd.args(["verify", "--suite", "all", "--cases", "10"])
            .args(extra);
        match env_seed {
            Some(seed) => cmd.env("REDLAB_SEED", seed),
            None => cmd.env_remove("REDLAB_SEED"),
        };
        cmd.output().unwrap()
    };
    let a = run(&["--seed", "42"], None);
    let b = run(&["--seed", "42"], None);
    assert_eq!(code(&a), 0);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("status=pass"));

    let env = run(&[], Some("42"));
    assert_eq!(env.stdout, a.stdout);
    assert_ne!(run(&["--seed", "43"], None).stdout, a.stdout);

    let to_file = run(&["--seed", "42", "--out", s(&first)], None);
    assert_eq!(code(&to_file), 0);
    assert!(to_file.stdout.is_empty());
    assert_eq!(fs::read(&first).unwrap(), a.stdout);

    let header = stdout(&a).lines().next().unwrap().to_string();
    assert_eq!(header, "suite,case_id,inputs_digest,lhs,rhs,holds,slack");
}

#[test]
fn hierarchy_export_and_query() {
    let out = redlab(&["hierarchy", "export", "--format", "dot"]);
    assert_eq!(code(&out), 0);
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    assert!(dot.lines().any(|l| l == r#"  "E1" -> "EKsigma";"#));
    assert_eq!(dot, stdout(&redlab(&["hierarchy", "export"])));

    let json = redlab(&["hierarchy", "export", "--format", "json"]);
    assert!(serde_json::from_str::<serde_json::Value>(&stdout(&json)).is_ok());

    assert_eq!(code(&redlab(&["hierarchy", "query", "E0", "ESinf"])), 0);
    assert_eq!(code(&redlab(&["hierarchy", "query", "ESinf", "E0"])), 3);
    assert_eq!(code(&redlab(&["hierarchy", "query", "Nope", "E0"])), 1);
}
