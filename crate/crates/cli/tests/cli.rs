//! End-to-end runs of the `opmono` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn opmono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opmono"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, json).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Data records of a report CSV.
fn records(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

fn read_rows(p: &Path) -> Vec<Vec<f64>> {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
    v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect())
        .collect()
}

fn assert_close(got: &[Vec<f64>], want: &[&[f64]], tol: f64) {
    for (g, w) in got.iter().zip(want) {
        for (x, y) in g.iter().zip(w.iter()) {
            assert!((x - y).abs() <= tol, "{got:?} vs {want:?}");
        }
    }
}

#[test]
fn geometric_mean_of_commuting_diagonals() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"dim":2,"rows":[[1,0],[0,4]]}"#);
    let b = write(&dir, "b.json", r#"{"dim":2,"rows":[[9,0],[0,16]]}"#);
    let out = dir.path().join("g.json");
    let r = opmono(&["eval", "--op", "gmean", "--A", s(&a), "--B", s(&b), "--nu", "0.5", "--out", s(&out)]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    assert_close(&read_rows(&out), &[&[3.0, 0.0], &[0.0, 8.0]], 1e-13);
    assert!(stdout(&r).contains("min_eigenvalue"));
}

#[test]
fn entropy_of_a_matrix_with_itself_vanishes() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"dim":2,"rows":[[2,0.5],[0.5,1]]}"#);
    let out = dir.path().join("s.json");
    let r = opmono(&["eval", "--op", "entropy", "--A", s(&a), "--B", s(&a), "--out", s(&out)]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    assert_close(&read_rows(&out), &[&[0.0, 0.0], &[0.0, 0.0]], 1e-14);
}

#[test]
fn identity_function_perspective_returns_b() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"dim":2,"rows":[[2,0.5],[0.5,1]]}"#);
    let b = write(&dir, "b.json", r#"{"dim":2,"rows":[[1,-0.25],[-0.25,3]]}"#);
    let r = opmono(&["eval", "--op", "perspective", "--fn", "power:1", "--A", s(&a), "--B", s(&b)]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let v: serde_json::Value = serde_json::from_str(stdout(&r).trim()).unwrap();
    let rows: Vec<Vec<f64>> = serde_json::from_value(v["rows"].clone()).unwrap();
    assert_close(&rows, &[&[1.0, -0.25], &[-0.25, 3.0]], 1e-13);
}

#[test]
fn matrix_function_of_diagonal() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"dim":2,"rows":[[4,0],[0,9]]}"#);
    let out = dir.path().join("f.json");
    let r = opmono(&["eval", "--op", "f-of-matrix", "--fn", "power:0.5", "--A", s(&a), "--out", s(&out)]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    assert_close(&read_rows(&out), &[&[2.0, 0.0], &[0.0, 3.0]], 1e-14);
}

#[test]
fn identity_check_on_user_matrices() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"dim":2,"rows":[[2,0.5],[0.5,1]]}"#);
    let b = write(&dir, "b.json", r#"{"dim":2,"rows":[[1,-0.25],[-0.25,3]]}"#);
    let p = write(&dir, "p.json", r#"{"dim":2,"rows":[[1.5,0.2],[0.2,0.7]]}"#);
    let r = opmono(&["eval", "--op", "check", "--only", "T2.1", "--fn", "power:0.5", "--A", s(&a), "--B", s(&b), "--P", s(&p)]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    assert!(stdout(&r).starts_with("T2.1 residual"));
}

#[test]
fn invalid_input_names_the_file() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", r#"{"dim":2,"rows":[[1,0],[0,1]]}"#);
    let indefinite = write(&dir, "indef.json", r#"{"dim":2,"rows":[[1,0],[0,-1]]}"#);
    let r = opmono(&["eval", "--op", "gmean", "--A", s(&good), "--B", s(&indefinite)]);
    assert_eq!(code(&r), 2);
    assert!(stderr(&r).contains("indef.json"), "{}", stderr(&r));

    let ragged = write(&dir, "ragged.json", r#"{"dim":2,"rows":[[1,0],[0]]}"#);
    let r = opmono(&["eval", "--op", "entropy", "--A", s(&ragged), "--B", s(&good)]);
    assert_eq!(code(&r), 2);
    assert!(stderr(&r).contains("ragged.json"));

    let r = opmono(&["eval", "--op", "gmean", "--A", s(&good), "--B", s(&good), "--nu", "1.5"]);
    assert_eq!(code(&r), 2);
}

#[test]
fn output_may_not_overwrite_an_input() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"dim":1,"rows":[[2]]}"#);
    let r = opmono(&["eval", "--op", "amean", "--A", s(&a), "--B", s(&a), "--out", s(&a)]);
    assert_eq!(code(&r), 2);
    assert_eq!(fs::read_to_string(&a).unwrap(), r#"{"dim":1,"rows":[[2]]}"#);
}

#[test]
fn dimension_mismatch_exits_3() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"dim":2,"rows":[[1,0],[0,1]]}"#);
    let b = write(&dir, "b.json", r#"{"dim":3,"rows":[[1,0,0],[0,1,0],[0,0,1]]}"#);
    let r = opmono(&["eval", "--op", "perspective", "--fn", "log", "--A", s(&a), "--B", s(&b)]);
    assert_eq!(code(&r), 3);
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(code(&opmono(&["verify", "--trials", "0"])), 2);
    assert_eq!(code(&opmono(&["verify", "--tol", "-1"])), 2);
    assert_eq!(code(&opmono(&["verify", "--fn", "power:2"])), 2);
    assert_eq!(code(&opmono(&["verify", "--only", "X9.9"])), 2);
    assert_eq!(code(&opmono(&["verify", "--no-such-flag"])), 2);
    assert_eq!(code(&opmono(&["convergence", "--budgets", "8,4"])), 2);
    assert_eq!(code(&opmono(&["--help"])), 0);
}

#[test]
fn dump_config_echoes_defaults() {
    let r = opmono(&["verify", "--dump-config"]);
    assert_eq!(code(&r), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&r)).unwrap();
    assert_eq!(v["command"], "verify");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["trials"], 10);
    assert_eq!(v["exponent_mode"], "corrected");
}

#[test]
fn verify_writes_one_row_per_check() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.csv");
    let r = opmono(&[
        "verify", "--fn", "power:0.5", "--only", "L2.1,T2.2,C2.1", "--dims", "1,2", "--trials", "3",
        "--report", s(&report),
    ]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let text = fs::read_to_string(&report).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "identity,fn,dim,seed,lhs_norm,residual_or_margin,panels,converged,pass"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3 * 2 * 3);
    assert!(rows.iter().all(|l| l.ends_with(",true,true")));
    assert!(stdout(&r).contains("C2.1"));
}

#[test]
fn as_printed_exponents_fail_the_gate() {
    let r = opmono(&[
        "verify", "--fn", "power:0.5", "--only", "P3.2", "--dims", "1", "--trials", "2",
        "--exponent-mode", "as_printed",
    ]);
    assert_eq!(code(&r), 4);
    assert!(records(&stdout(&r)).iter().all(|rec| &rec[8] == "false"));
}

#[test]
fn convergence_reports_each_budget() {
    let r = opmono(&["convergence", "--budgets", "4,8,16"]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let out = stdout(&r);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "budget,residual");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("16,"));
}

#[test]
fn identity_suite_row_count() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.csv");
    let r = opmono(&[
        "verify", "--suite", "identities", "--dims", "2,3", "--trials", "10", "--seed", "42",
        "--fn", "power:0.5", "--report", s(&report),
    ]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    // E2.5 L2.1 T2.1 L2.2 T2.2 C2.1 C2.2 P3.1 P3.2 TRANSPOSE-1.4
    let rows = fs::read_to_string(&report).unwrap().lines().count() - 1;
    assert_eq!(rows, 10 * 2 * 10);
}

#[test]
fn as_printed_first_kind_exponent_is_rejected() {
    let r = opmono(&[
        "verify", "--suite", "identities", "--fn", "power:0.5", "--exponent-mode", "as_printed",
        "--only", "P3.1",
    ]);
    assert_eq!(code(&r), 4);
    for rec in records(&stdout(&r)) {
        let residual: f64 = rec[5].parse().unwrap();
        assert!(residual >= 1e-2, "{rec:?}");
    }
}

#[test]
fn scalar_only_run_is_tight() {
    let r = opmono(&["verify", "--trials", "1", "--dims", "1"]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    for rec in records(&stdout(&r)) {
        if rec[0].starts_with("INEQ") || &rec[0] == "YOUNG" || &rec[0] == "THM-C" {
            continue;
        }
        let residual: f64 = rec[5].parse().unwrap();
        assert!(residual <= 1e-7, "{rec:?}");
    }
}

#[test]
fn convergence_at_default_budget_matches_verify() {
    let conv = opmono(&["convergence", "--only", "T2.4", "--fn", "log", "--dims", "3", "--budgets", "4096"]);
    assert_eq!(code(&conv), 0, "{}", stderr(&conv));
    let conv_residual = records(&stdout(&conv))[0][1].to_string();
    let ver = opmono(&["verify", "--fn", "log", "--only", "T2.4", "--dims", "3", "--trials", "1"]);
    assert_eq!(code(&ver), 0, "{}", stderr(&ver));
    let ver_residual = records(&stdout(&ver))[0][5].to_string();
    assert_eq!(conv_residual, ver_residual);
}
