use cuspfib::cuspdual::{DualityReport, Triple};
use cuspfib::k3glue::{GlueReport, InoseClassification, TableRow};
use cuspfib::milnorfiber::MonodromyReport;
use cuspfib::numcheck::FibrationReport;
use cuspfib::quadlattice::LatticeReport;
use cuspfib::sl2z::{MonodromySummary, Sl2Class, Sl2Matrix};
use serde::de::DeserializeOwned;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspfib"))
        .args(args)
        .env_remove("CUSPFIB_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json<T: DeserializeOwned>(args: &[&str]) -> (T, String) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    (serde_json::from_str(&text).unwrap(), text)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("cuspfib-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn dual_238() {
    let (rep, text) = json::<DualityReport>(&["dual", "2", "3", "8", "--json"]);
    assert!(text.contains(r#""dual":[2,4,5]"#));
    assert!(text.contains(r#""alpha_v":"2+sqrt(3)""#));
    assert_eq!(rep.dual, Triple::new(2, 4, 5).unwrap());
    assert!(rep.passed());
    // the serialized form is a fixed point of the library's deserializer
    assert_eq!(serde_json::to_string(&rep).unwrap() + "\n", text);
}

#[test]
fn monodromy_237() {
    let (rep, text) = json::<MonodromySummary>(&["monodromy", "2", "3", "7", "--json"]);
    assert_eq!(rep.matrix, Sl2Matrix::from_i64(5, -11, 1, -2).unwrap());
    assert_eq!(rep.class, Sl2Class::Hyperbolic);
    assert!(text.contains(r#""matrix":[[5,-11],[1,-2]]"#));
    assert!(text.contains(r#""class":"hyperbolic""#));
    let plain = stdout(&run(&["monodromy", "2", "3", "7"]));
    assert!(plain.contains("[[5, -11], [1, -2]]") && plain.contains("hyperbolic"));
}

#[test]
fn inose_cases() {
    let (rep, text) = json::<InoseClassification>(&["inose", "--case", "0,0,2,2", "--json"]);
    assert!(text.contains(r#""boundary":"X_{2,3,7}""#));
    assert!(rep.passed());
    for (case, boundary) in [("0,2,0,2", "X_{2,5,5}"), ("0,1,0,2", "X_{2,4,5}"), ("0,2,1,2", "X_{2,3,8}")] {
        let (rep, _) = json::<InoseClassification>(&["inose", "--case", case, "--json"]);
        assert_eq!(rep.boundary.as_deref(), Some(boundary));
    }
    // the other sign convention for the third curve gets case (2) wrong
    let o = run(&["inose", "--case", "0,2,0,2", "--gamma", "1,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lattice_and_k3() {
    let o = run(&["lattice", "2", "3", "7", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let l: LatticeReport = serde_json::from_value(v["lattice"].clone()).unwrap();
    assert_eq!(l.discriminant, (-1).into());
    let m: MonodromyReport = serde_json::from_value(v["milnor"].clone()).unwrap();
    assert!(m.is_isometry && m.fixes_fibre);

    let (g, _) = json::<GlueReport>(&["k3", "--pair", "2,3,7", "--json"]);
    assert_eq!(g.k3_isomorphic, Some(true));
    let (g, _) = json::<GlueReport>(&["k3", "--pair", "2,4,5/2,3,8", "--json"]);
    assert_eq!(g.critical_count, 24);
    assert!(!g.unimodular);
    assert_eq!(run(&["k3", "--pair", "2,3,7/2,3,8"]).status.code(), Some(2));
}

#[test]
fn table_is_deterministic() {
    let (rows, first) = json::<Vec<TableRow>>(&["table", "--json"]);
    let (_, second) = json::<Vec<TableRow>>(&["table", "--json"]);
    assert_eq!(first, second);
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.passed() && r.critical_count == 24));
    assert_eq!(stdout(&run(&["table"])), stdout(&run(&["table"])));
}

#[test]
fn verify_fibration_json() {
    let args = ["verify-fibration", "--pqr", "2,3,7", "--t", "1", "--samples", "200", "--seed", "42", "--json"];
    let (rep, text) = json::<FibrationReport>(&args);
    assert!(rep.passed());
    assert_eq!(rep.critical.accepted_count, 12);
    assert_eq!(rep.symplectic.samples, 200);
    assert_eq!(serde_json::to_string(&rep).unwrap() + "\n", text);
}

#[test]
fn tolerance_file_and_environment() {
    // an impossible Hessian tolerance turns the run into a mathematical failure
    let strict = temp_file("strict.toml", "hessian_tol = 1e-30\n");
    let o = run(&["verify-fibration", "--pqr", "2,3,7", "--samples", "50", "--tolerance-file", strict.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_cuspfib"))
        .args(["verify-fibration", "--pqr", "2,3,7", "--samples", "50"])
        .env("CUSPFIB_CONFIG", &strict)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let bad = temp_file("bad.toml", "no_such_key = 3\n");
    let o = run(&["verify-fibration", "--pqr", "2,3,7", "--tolerance-file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let _ = std::fs::remove_file(strict);
    let _ = std::fs::remove_file(bad);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["dual", "2", "3", "6"],
        vec!["dual", "2", "3"],
        vec!["inose", "--case", "0,3,0,2"],
        vec!["inose", "--case", "0,0,2"],
        vec!["verify-fibration", "--pqr", "2,3,7", "--t", "2"],
        vec!["verify-fibration", "--pqr", "2,3,7", "--a", "1"],
        vec!["nonsense"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}
