//! End-to-end checks of the binary: output schemas, exit codes,
//! determinism, and the parse/format round trip.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn eig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eig"))
        .args(args)
        .env_remove("EIG_TOL")
        .env_remove("EIG_WINDOW")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn classify_integer_comb() {
    let out = eig(&["classify", "dirac_comb(1)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"eigenvalue":"1"}"#);
}

#[test]
fn classify_non_eigenmeasure_is_null() {
    let out = eig(&["classify", "Z(0, 1/3, 1)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"eigenvalue":null}"#);
}

#[test]
fn dft_multiplicities() {
    let out = eig(&["dft", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["multiplicities"], serde_json::json!([2, 0, 1, 1]));

    let out = eig(&["dft", "5", "--eigenvalue", "i"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["lambda"], "i");
    assert_eq!(v["vectors"].as_array().unwrap().len(), 1);
}

#[test]
fn transform_silver_mean_comb() {
    let out = eig(&["transform", "(1+1*sqrt(2))*Z(0,0,2) + Z(0,1/2*sqrt(2),2)"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 2);
}

#[test]
fn verify_passes_and_fails_by_tolerance() {
    let out = eig(&["verify", "Z(1/3,1/5,1)", "--tol", "1e-8"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], true);

    // an absurd tolerance flips the exit code to 1
    let out = eig(&["verify", "Z(1/3,1/5,1)", "--tol", "1e-18"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn syntax_errors_exit_2_with_one_line() {
    let out = eig(&["classify", "Z(1/2, 1/3, 1) + ("]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(err.trim().lines().count(), 1);
    assert!(err.contains("byte 18"), "stderr: {err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(eig(&["bogus-subcommand"]).status.code(), Some(2));
    assert_eq!(eig(&["project", "j", "dirac_comb(1)"]).status.code(), Some(2));
    assert_eq!(eig(&["classify", "dirac_comb(2) + dirac_comb(3)"]).status.code(), Some(2));
    assert_eq!(eig(&["shadow", "--theta", "x", "--g", "hermite:0"]).status.code(), Some(2));
    assert_eq!(eig(&["shadow", "--theta", "0.5", "--g", "box:1"]).status.code(), Some(2));
}

#[test]
fn periodic_rejects_non_eigenvectors() {
    let out = eig(&["periodic", "2", "1", "--vector", "1,5"]);
    assert_eq!(out.status.code(), Some(1));

    let out = eig(&["periodic", "2", "1", "--vector", "2.414213562373095,1"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 2);

    // trivial eigenspace reports failure, not success
    let out = eig(&["periodic", "2", "i"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["transform", "Z(1/3, -1/4, 2) + 1/7*Z(0, 1/2*sqrt(2), 2)"],
        vec!["dft", "8", "--eigenvalue", "-1"],
        vec!["sample", "Z(1/2, 0, 1)", "--window", "3"],
        vec!["shadow", "--theta", "atan(1/1)", "--g", "hermite:0", "--window", "4"],
    ] {
        let a = eig(&args);
        let b = eig(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
    }
}

#[test]
fn stdin_expression() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_eig"))
        .args(["classify", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(b"dirac_comb(1)\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"eigenvalue":"1"}"#);
}

#[test]
fn env_variables_set_defaults() {
    // a tolerance from the environment loose enough to call a shifted
    // comb an eigenmeasure changes the classification
    let out = Command::new(env!("CARGO_BIN_EXE_eig"))
        .args(["verify", "Z(1/3,1/5,1)"])
        .env("EIG_TOL", "1e-18")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sample_csv_shape() {
    let out = eig(&["sample", "dirac_comb(1)", "--window", "2.5", "--out", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("position,re,im"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn shadow_csv_and_json_agree() {
    let args_common = ["--theta", "atan(1/1)", "--g", "hermite:0", "--window", "4"];
    let mut csv_args = vec!["shadow"];
    csv_args.extend_from_slice(&args_common);
    csv_args.extend_from_slice(&["--out", "csv"]);
    let csv = eig(&csv_args);
    let mut json_args = vec!["shadow"];
    json_args.extend_from_slice(&args_common);
    let json = eig(&json_args);
    assert!(csv.status.success() && json.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let rows = stdout(&csv).lines().count() - 1;
    assert_eq!(v["atoms"].as_array().unwrap().len(), rows);
}

#[test]
fn format_round_trip_corpus() {
    use eigenmeasure_cli::{eval::evaluate, format_measure, parser::parse};

    let mut corpus: Vec<String> = vec![
        "dirac_comb(1)".into(),
        "dirac_comb(2)".into(),
        "ft(dirac_comb(1))".into(),
        "ft(Z(0, 1/2*sqrt(2), 2))".into(),
        "(1+1*sqrt(2))*Z(0,0,2) + Z(0,1/2*sqrt(2),2)".into(),
        "proj(i, Z(1/4,1/3,1))".into(),
        "proj(-1, Z(1/4,1/3,1))".into(),
        "refl(Z(1/3, 1/4, 1))".into(),
        "conj(1/2*i*Z(0, 1/4, 1))".into(),
        "Y(1/4, 1/3, 1, -1)".into(),
        "Z(0,0,1) - 1/2*Z(0,0,1)".into(),
        "dirac_comb(1) + dirac_comb(4)".into(),
    ];
    // systematic single-atom expressions over several ambients
    for n in [1u64, 2, 3, 5] {
        for (p, q) in [(0i64, 1i64), (1, 4), (-1, 3), (3, 8)] {
            for (u, v) in [(0i64, 1i64), (1, 2), (-2, 5)] {
                corpus.push(format!("Z({p}/{q}, {u}/{v}, {n})"));
                if corpus.len() >= 50 {
                    break;
                }
            }
        }
    }
    assert!(corpus.len() >= 50);

    for text in &corpus {
        let mu = evaluate(&parse(text).unwrap()).unwrap();
        let rendered = format_measure(&mu).unwrap();
        let back = evaluate(&parse(&rendered).unwrap_or_else(|e| {
            panic!("re-parse of {rendered:?} failed: {e}");
        }))
        .unwrap();
        assert!(
            back.equals(&mu, 1e-9).unwrap(),
            "round trip drifted for {text:?} via {rendered:?}"
        );
    }
}
