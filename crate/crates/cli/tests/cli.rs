use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_periodforge"));
    c.env_remove("PERIODFORGE_TRUNCATION");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let errors: Vec<String> = schema().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {:?}", errors);
    v
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

const H242: &str = r#"{"weight":2,"h":[2,4,2]}"#;
const H1111: &str = r#"{"weight":3,"h":[1,1,1,1]}"#;

#[test]
fn printed_bound_weight_two() {
    let v = report(&run(&["bounds", "q", "--hodge", H242, "--mode", "printed"]));
    assert_eq!(v["command"], "bounds q");
    assert_eq!(v["result"]["max"], 4);
    assert_eq!(v["seed"], 0);
}

#[test]
fn exp_chart_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let element = serde_json::json!({
        "hodge": {"weight": 3, "h": [1, 3, 3, 1]},
        "basis": [
            {"blocks": {"2,1": [["1","0","0"],["0","0","0"],["0","0","0"]]}},
            {"blocks": {"2,1": [["0","1","0"],["1","0","0"],["0","0","0"]]}}
        ]
    });
    let e = write(dir.path(), "e.json", &element);
    let chart = report(&run(&["germ", "exp-construct", "--element", e.to_str().unwrap(), "--truncation", "3"]));
    assert_eq!(chart["input"]["truncation"], 3);
    let c = write(dir.path(), "c.json", &chart["result"]["chart"]);
    let v = report(&run(&["germ", "verify", "--chart", c.to_str().unwrap()]));
    assert_eq!(v["result"]["is_horizontal"], true);

    let a = write(dir.path(), "a.json", &chart["result"]["chart"]);
    let cmp = report(&run(&["rigidity", "compare", a.to_str().unwrap(), c.to_str().unwrap()]));
    assert_eq!(cmp["result"]["equal"], true);
}

#[test]
fn truncation_from_environment() {
    let element = r#"{"hodge":{"weight":3,"h":[1,1,1,1]},"basis":[{"blocks":{"1,0":[["1"]]}}]}"#;
    let out = bin()
        .args(["germ", "exp-construct", "--element", element])
        .env("PERIODFORGE_TRUNCATION", "2")
        .output()
        .unwrap();
    assert_eq!(report(&out)["input"]["truncation"], 2);
    let out = bin()
        .args(["germ", "exp-construct", "--element", element])
        .env("PERIODFORGE_TRUNCATION", "two")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flexible_probe() {
    let v = report(&run(&[
        "rigidity",
        "probe",
        "--hodge",
        r#"{"weight":4,"h":[2,4,5,4,2]}"#,
        "--flexible",
        "--degree",
        "2",
    ]));
    let text = serde_json::to_string(&v["result"]["report"]).unwrap();
    assert!(text.contains(r#""verdict":"flexible""#));
    assert!(text.contains(r#""first_flexible_degree":2"#));
}

#[test]
fn rigid_probe_from_pattern_file() {
    let dir = tempfile::tempdir().unwrap();
    let pattern = serde_json::json!({
        "hodge": {"weight": 3, "h": [1, 3, 3, 1]},
        "entries": ["Y[2,1][1,1]", "Y[2,1][1,2]", "Y[2,1][1,3]", "Y[2,1][2,2]", "Y[2,1][2,3]", "Y[2,1][3,3]"]
    });
    let p = write(dir.path(), "p.json", &pattern);
    let h = write(dir.path(), "h.json", &pattern["hodge"]);
    let v = report(&run(&[
        "rigidity",
        "probe",
        "--hodge",
        h.to_str().unwrap(),
        "--pattern",
        p.to_str().unwrap(),
        "--degree",
        "3",
    ]));
    assert_eq!(v["result"]["report"]["verdict"], "rigid");
    assert_eq!(v["result"]["report"]["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let out = run(&[
            "bounds",
            "sweep",
            "--max-weight",
            "3",
            "--max-h",
            "2",
            "--families",
            "20",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        texts.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let v: Value = serde_json::from_slice(&texts[0]).unwrap();
    assert_eq!(v["seed"], 7);
    assert!(schema().is_valid(&v));
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 2);
}

#[test]
fn exit_codes() {
    let out = run(&["hodge", "validate", "--hodge", r#"{"weight":2,"h":[2,4,3]}"#]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("symmetry"));

    let out = run(&["hodge", "validate", "--hodge", "/nonexistent/h.json"]);
    assert_eq!(out.status.code(), Some(1));

    let element = r#"{"hodge":{"weight":3,"h":[1,1,1,1]},"basis":[{"blocks":{"1,0":[["1"]]}},{"blocks":{"2,1":[["1"]]}}]}"#;
    let out = run(&["algebra", "check-element", "--element", element]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("do not commute"));

    let chart = r#"{"hodge":{"weight":3,"h":[1,1,1,1]},"params":["x1","x2"],"blocks":{"1,0":[["x1"]],"2,1":[["x2"]]},"truncation":3}"#;
    let out = run(&["germ", "verify", "--chart", chart]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["is_horizontal"], false);
    assert!(!v["result"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn other_subcommands() {
    let v = report(&run(&["hodge", "dim", "--hodge", H1111]));
    assert_eq!(v["result"]["horizontal"], 2);

    let v = report(&run(&[
        "algebra",
        "bracket",
        "--hodge",
        H1111,
        "--x",
        r#"{"blocks":{"1,0":[["1"]]}}"#,
        "--y",
        r#"{"blocks":{"2,1":[["1"]]}}"#,
    ]));
    assert_eq!(v["result"]["is_zero"], false);

    let v = report(&run(&["algebra", "exp", "--hodge", H1111, "--x", r#"{"blocks":{"1,0":[["2"]]}}"#]));
    assert!(v["result"]["exp"]["blocks"].as_object().unwrap().contains_key("1,0"));

    let v = report(&run(&["contact", "arnold", "--n", "2", "--f", "x1^2*y2", "--i", "1", "--j", "2"]));
    let chart = serde_json::to_string(&v["result"]["chart"]).unwrap();
    let v = report(&run(&["contact", "verify", "--chart", &chart]));
    assert_eq!(v["result"]["is_integral"], true);

    let v = report(&run(&["contact", "generators", "--hodge", r#"{"weight":4,"h":[1,1,1,1,1]}"#]));
    assert!(v["result"]["num_equations"].as_u64().unwrap() > 0);

    let v = report(&run(&["germ", "flex", "--hodge", r#"{"weight":4,"h":[2,4,5,4,2]}"#, "--truncation", "3"]));
    assert_eq!(v["result"]["is_horizontal"], true);

    let v = report(&run(&["bounds", "qp", "--hodge", r#"{"weight":3,"h":[3,2,2,3]}"#]));
    assert_eq!(v["result"]["max"], 6);

    let v = report(&run(&["bounds", "search", "--hodge", H242]));
    assert_eq!(v["result"]["best"], 4);
    assert_eq!(v["result"]["witness_validated"], true);

    let v = report(&run(&["rigidity", "scan", "--hodge", r#"{"weight":3,"h":[1,3,3,1]}"#, "--samples", "8"]));
    assert_eq!(v["result"]["unique"], true);
}

#[test]
fn extend_reduced_chart() {
    let dir = tempfile::tempdir().unwrap();
    let flex = report(&run(&["germ", "flex", "--hodge", r#"{"weight":4,"h":[2,4,5,4,2]}"#, "--truncation", "3"]));
    let mut w = flex["result"]["chart"].clone();
    let blocks = w["blocks"].as_object_mut().unwrap();
    blocks.retain(|k, _| {
        let (a, b) = k.split_once(',').unwrap();
        a.parse::<usize>().unwrap() - b.parse::<usize>().unwrap() <= 2
    });
    w.as_object_mut().unwrap().remove("graph");
    let p = write(dir.path(), "w.json", &w);
    let v = report(&run(&["germ", "extend", "--chart", p.to_str().unwrap()]));
    assert_eq!(v["result"]["is_horizontal"], true);
}
