use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_stripmix"));
    c.env_remove("STRIPMIX_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn stripmix")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "schemas",
        &format!("{name}.schema.json"),
    ]
    .iter()
    .collect();
    let text = std::fs::read_to_string(&path).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&value).unwrap()
}

fn check(name: &str, args: &[&str]) -> Value {
    let v: Value = serde_json::from_str(&stdout(args)).unwrap();
    let validator = schema(name);
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name} {args:?}: {errors:?}");
    v
}

#[test]
fn json_outputs_match_schemas() {
    for m in ["1", "2", "3"] {
        check(
            "count",
            &["count", "--m", m, "--n-max", "9", "--format", "json"],
        );
        check("growth", &["growth", "--m", m]);
        check("genfun", &["genfun", "--m", m]);
    }
    let k = check("kernel", &["kernel", "--m", "2", "--n", "4"]);
    assert_eq!(k["vertices"].as_array().unwrap().len(), 15);
    check("kernel", &["kernel", "--m", "1", "--n", "3", "--json"]);
    check(
        "mix",
        &["mix", "--m", "2", "--n", "4", "--exact-phi", "--tmax", "5"],
    );
    check(
        "mix",
        &[
            "mix", "--m", "2", "--n", "3", "--chain", "lazy", "--p", "1/3", "--tmax", "4",
        ],
    );
    check("pip", &["pip", "--m", "2", "--n", "4"]);
    check(
        "simulate",
        &[
            "simulate", "--m", "2", "--n", "4", "--start", "EEEE", "--steps", "20", "--format",
            "json",
        ],
    );
}

#[test]
fn schemas_reject_malformed_documents() {
    let v = schema("count");
    assert!(v.is_valid(&serde_json::json!({"m": 2, "n_max": 1, "counts": ["1", "2"]})));
    assert!(!v.is_valid(&serde_json::json!({"m": 2, "n_max": 1, "counts": [1, 2]})));
    assert!(!v.is_valid(&serde_json::json!({"m": 2, "counts": ["1"]})));
    let g = schema("genfun");
    assert!(!g.is_valid(&serde_json::json!({
        "m": 1, "numerator": ["1"], "denominator": ["2"], "series": [], "text": ""
    })));
}

#[test]
fn output_is_deterministic() {
    let cases: &[&[&str]] = &[
        &["count", "--m", "3", "--n-max", "20", "--format", "csv"],
        &["kernel", "--m", "2", "--n", "5"],
        &["kernel", "--m", "2", "--n", "5", "--dot"],
        &["mix", "--m", "2", "--n", "4", "--tmax", "10"],
        &[
            "simulate", "--m", "2", "--n", "5", "--start", "EEEEE", "--steps", "50", "--seed", "7",
        ],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["kernel", "--m", "2", "--n", "6"];
    let base = stdout(&args);
    let flag = bin().args(args).args(["--threads", "3"]).output().unwrap();
    let env = bin()
        .args(args)
        .env("STRIPMIX_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(flag.stdout).unwrap(), base);
    assert_eq!(String::from_utf8(env.stdout).unwrap(), base);
    let bad = bin()
        .args(args)
        .env("STRIPMIX_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn csv_has_one_metadata_line() {
    let out = stdout(&["count", "--m", "2", "--n-max", "7", "--format", "csv"]);
    let meta: Vec<&str> = out.lines().filter(|l| l.starts_with('#')).collect();
    assert_eq!(meta.len(), 1);
    assert!(out.starts_with('#'));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows.last().unwrap().split(',').nth(1), Some("101"));

    let sim = stdout(&[
        "simulate", "--m", "2", "--n", "4", "--start", "NEEE", "--steps", "5",
    ]);
    assert_eq!(sim.lines().filter(|l| l.starts_with('#')).count(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["count", "--m", "x", "--n-max", "3"]).status.code(),
        Some(2)
    );
    let lazy = ["mix", "--m", "2", "--n", "4", "--chain", "lazy", "--p"];
    assert_eq!(
        bin().args(lazy).arg("abc").output().unwrap().status.code(),
        Some(2)
    );
    assert_eq!(
        bin().args(lazy).arg("3/2").output().unwrap().status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["count", "--m", "2", "--n-max", "3", "--format", "dot"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["growth", "--m", "0"]).status.code(), Some(3));
    assert_eq!(run(&["mix", "--m", "1", "--n", "4"]).status.code(), Some(3));
    assert_eq!(
        run(&["simulate", "--m", "2", "--n", "3", "--start", "NNN", "--steps", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["kernel", "--m", "6", "--n", "20"]).status.code(),
        Some(4)
    );
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("stripmix-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.json");
    let out = run(&["genfun", "--m", "2", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["text"], "(x^3 + x^2 + 1) / (-x^4 - x^3 + x^2 - 2x + 1)");
    std::fs::remove_dir_all(&dir).ok();
}
