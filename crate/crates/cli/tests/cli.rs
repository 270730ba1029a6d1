use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn candeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_candeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn machine_docs(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON document per line"))
        .collect()
}

fn double_plane() -> Value {
    let o = candeg(&["catalog", "show", "double-plane", "--format", "machine"]);
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn write_catalog(name: &str, doc: &Value) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("entries.json");
    std::fs::write(&path, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    path
}

#[test]
fn full_catalog_regression_exits_zero() {
    let o = candeg(&["run", "--all", "--format", "machine"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let docs = machine_docs(&o);
    let ids: Vec<&str> = docs.iter().map(|d| d["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted, "output ordered by id");
    assert!(docs.iter().all(|d| d["exit"] == 0));
}

#[test]
fn catalog_has_expected_shape() {
    let o = candeg(&["catalog", "list", "--format", "machine"]);
    let docs = machine_docs(&o);
    let count = |k: &str| docs.iter().filter(|d| d["kind"] == k).count();
    assert!(count("abelian_cover") >= 12);
    assert_eq!(count("generating_pair"), 4);
    assert!(count("record_only") >= 2);
}

#[test]
fn parameter_override() {
    let o = candeg(&[
        "invariants",
        "z3sq-quadric-horikawa",
        "--param",
        "m=4",
        "--format",
        "machine",
    ]);
    assert_eq!(code(&o), 0);
    let d = &machine_docs(&o)[0];
    assert_eq!(d["computed"]["k2"], 56);
    assert_eq!(d["computed"]["pg"], 6);
    assert_eq!(d["params"]["m"], 4);
}

#[test]
fn canonical_report_for_horikawa_example() {
    let o = candeg(&[
        "canonical",
        "z3sq-quadric-horikawa",
        "--param",
        "m=3",
        "--format",
        "machine",
    ]);
    let d = &machine_docs(&o)[0];
    assert_eq!(d["computed"]["degree"], 6);
    assert_eq!(d["computed"]["fixed_part"]["D11"], 2);
    assert_eq!(d["computed"]["isolated_points"], 12);
}

#[test]
fn input_errors_exit_two() {
    let o = candeg(&["invariants", "z3sq-quadric-horikawa", "--param", "m=1"]);
    assert_eq!(code(&o), 2);
    let o = candeg(&["invariants", "no-such-entry"]);
    assert_eq!(code(&o), 2);
    let o = candeg(&["genpair", "beauville-kummer", "--n", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn mismatch_is_strict_by_default() {
    let mut e = double_plane();
    e["id"] = json!("double-plane-wrong");
    e["expect"]["k2"]["value"] = json!(9);
    let path = write_catalog("mismatch", &e);
    let p = path.to_str().unwrap();
    let o = candeg(&["--catalog", p, "invariants", "double-plane-wrong"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL k2"), "{}", stdout(&o));
    let o = candeg(&[
        "--catalog",
        p,
        "--expect",
        "report",
        "invariants",
        "double-plane-wrong",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn schema_errors() {
    let mut e = double_plane();
    e["cover"]["surface"] = json!({"kind": "k3"});
    let path = write_catalog("bad-kind", &e);
    let o = candeg(&["--catalog", path.to_str().unwrap(), "catalog", "list"]);
    assert_eq!(code(&o), 2);

    let mut e = double_plane();
    e["cover"]["branch"][0]["v"] = json!([0]);
    let path = write_catalog("zero-v", &e);
    let o = candeg(&["--catalog", path.to_str().unwrap(), "catalog", "list"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("double-plane"));
}

#[test]
fn unresolvable_cohomology_exits_three() {
    let mut e = double_plane();
    e["id"] = json!("declared-plane");
    e["cover"]["surface"] = json!({
        "kind": "declared", "gram": [[1]], "canonical": [-3], "q": 0, "pg": 0
    });
    let path = write_catalog("declared", &e);
    let o = candeg(&[
        "--catalog",
        path.to_str().unwrap(),
        "invariants",
        "declared-plane",
    ]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
}

#[test]
fn bounds_verbs() {
    let o = candeg(&[
        "bounds",
        "enumerate",
        "--case",
        "B",
        "--d",
        "4..9",
        "--format",
        "machine",
    ]);
    assert_eq!(code(&o), 0);
    let rows = machine_docs(&o);
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0]["max_pg"], 12);
    assert_eq!(rows[0]["discrepancy"], true);
    assert!(rows[1..].iter().all(|r| r["discrepancy"] == false));

    let o = candeg(&["bounds", "check", "rito-fpp-36"]);
    assert_eq!(code(&o), 0);
    let o = candeg(&[
        "bounds",
        "check",
        r#"{"case":"A","d":37,"pg":3,"q_x":0,"q_sigma":0}"#,
        "--format",
        "machine",
    ]);
    assert_eq!(code(&o), 1);
    let d = &machine_docs(&o)[0];
    let r5 = d["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["rule"] == "R5")
        .unwrap();
    assert_eq!(r5["status"], "fail");
    assert_eq!(r5["slack"], -1);
}

#[test]
fn genpair_sequence() {
    let o = candeg(&[
        "genpair",
        "beauville-kummer",
        "--n",
        "3",
        "--format",
        "machine",
    ]);
    assert_eq!(code(&o), 0);
    let d = &machine_docs(&o)[0];
    assert_eq!(d["sequence"]["pg"], 9);
    assert_eq!(d["sequence"]["k2_x"], 40);
    assert_eq!(d["slope_limit"], json!([6, 1]));
}
