use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fieldsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fieldsim")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("fieldsim-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d
}

fn path(d: &PathBuf, f: &str) -> String {
    d.join(f).to_str().unwrap().to_string()
}

#[test]
fn build_writes_registry_and_sorted_monomials() {
    let d = scratch("build");
    let h = path(&d, "h.json");
    let out = fieldsim(&["build", "scalar", "--L", "2", "--d", "1", "--m2", "1.0", "--lambda", "0.5", "--out", &h]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&h).unwrap()).unwrap();
    assert_eq!(v["n_bosons"], 2);
    assert_eq!(v["bosons"].as_array().unwrap().len(), 2);
    let factors: Vec<Vec<(u64, u64)>> = v["monomials"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| serde_json::from_value(m["factors"].clone()).unwrap())
        .collect();
    assert!(factors.len() > 3);
    assert!(factors.windows(2).all(|w| w[0] < w[1]));

    let mm = fieldsim(&["build", "matrix-model", "--N", "2", "--d", "2"]);
    let v: Value = serde_json::from_slice(&mm.stdout).unwrap();
    assert_eq!(v["source"]["traceless"], true);
    assert_eq!(v["n_bosons"], 6);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fieldsim(&["build", "gravity"]).status.code(), Some(2));
    assert_eq!(fieldsim(&["table", "scalar", "--sweep", "L="]).status.code(), Some(2));
    assert_eq!(fieldsim(&["count", "scalar", "--model", "t_typ=5"]).status.code(), Some(2));
    assert_eq!(fieldsim(&["build", "orbifold", "--d", "4"]).status.code(), Some(2));
    assert_eq!(fieldsim(&["compile", "/nonexistent/h.json"]).status.code(), Some(2));
}

#[test]
fn compile_is_deterministic_and_matches_count() {
    let d = scratch("compile");
    let h = path(&d, "h.json");
    assert!(fieldsim(&["build", "matrix-model", "--N", "2", "--d", "2", "--out", &h]).status.success());
    let mut runs = Vec::new();
    for i in 0..2 {
        let c = path(&d, &format!("c{i}.txt"));
        let r = path(&d, &format!("r{i}.json"));
        let out = fieldsim(&["compile", &h, "--Q", "2", "--R", "1.5", "--dt", "0.05", "--out", &c, "--report", &r]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        runs.push((fs::read(&c).unwrap(), fs::read(&r).unwrap()));
    }
    assert_eq!(runs[0], runs[1]);

    let report: Value = serde_json::from_slice(&runs[0].1).unwrap();
    let count = fieldsim(&["count", "matrix-model", "--N", "2", "--d", "2", "--Q", "2", "--R", "1.5", "--dt", "0.05"]);
    let count: Value = serde_json::from_slice(&count.stdout).unwrap();
    for key in ["cnot", "rz", "clifford_1q", "t_count", "depth", "breakdown"] {
        assert_eq!(report["counts"][key], count["report"][key], "{key}");
    }
    let analytic = fieldsim(&["count", "matrix-model", "--N", "2", "--d", "2", "--Q", "2", "--R", "1.5", "--analytic"]);
    let analytic: Value = serde_json::from_slice(&analytic.stdout).unwrap();
    assert_eq!(analytic["report"]["t_count"], count["report"]["t_count"]);
}

#[test]
fn zero_dt_compiles_to_identity() {
    let d = scratch("zero");
    let h = path(&d, "h.json");
    assert!(fieldsim(&["build", "anharmonic", "--out", &h]).status.success());
    let out = fieldsim(&["compile", &h, "--Q", "4", "--R", "3", "--dt", "0"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "qubits 4\n");
}

#[test]
fn anharmonic_q4_has_four_qubit_gadget() {
    let d = scratch("q4");
    let h = path(&d, "h.json");
    assert!(fieldsim(&["build", "anharmonic", "--out", &h]).status.success());
    let text = String::from_utf8(fieldsim(&["compile", &h, "--Q", "4", "--R", "3"]).stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let ladder = ["cnot q0 q1", "cnot q1 q2", "cnot q2 q3"];
    let found = lines.windows(7).any(|w| {
        w[..3] == ladder && w[3].starts_with("rz q3 ") && w[4] == ladder[2] && w[5] == ladder[1] && w[6] == ladder[0]
    });
    assert!(found);
}

#[test]
fn table_reports_exponents() {
    let out = fieldsim(&["table", "scalar", "--Q", "4", "--sweep", "L=3,4,5,6", "--format", "json", "--model", "t_typ=10"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let e = &v["tables"][0]["exponents"];
    assert!((e["qubits"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((e["t_potential"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let text = fieldsim(&["table", "scalar", "--Q", "4", "--sweep", "L=3,4,5,6"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert_eq!(text.matches("# T model").count(), 2);
}

#[test]
fn verify_suites_pass() {
    for suite in ["gadgets", "qft"] {
        let out = fieldsim(&["verify", suite]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    let out = fieldsim(&["verify", "trotter", "--theory", "matrix-model"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("PASS"));
    assert_eq!(fieldsim(&["verify", "trotter", "--theory", "orbifold"]).status.code(), Some(2));
}
