//! End-to-end tests of the command-line interface: exit-code contract,
//! output schema and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ratio-bounds"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("ratio-bounds-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn enclose_reference_point() {
    let out = run(&[
        "enclose", "--kind", "I", "--nu", "1", "--x", "1", "--level", "1", "--oracle",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lower_family=Btilde0"), "{text}");
    assert!(text.contains("upper_family=Btilde2"), "{text}");
    assert!(text.contains("lower=4.4538276889462"), "{text}");
    assert!(text.contains("upper=4.4644821135494"), "{text}");
    assert!(text.contains("oracle=4.4638996589653"), "{text}");
}

#[test]
fn enclose_equality_point_on_k_side() {
    let out = run(&[
        "enclose", "--kind", "K", "--nu", "0.5", "--x", "7", "--level", "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lower=1.0000000000000000e0"), "{text}");
    assert!(text.contains("upper=1.0000000000000000e0"), "{text}");
}

#[test]
fn enclose_low_order_avoids_restricted_families() {
    let out = run(&[
        "enclose", "--kind", "I", "--nu", "0.3", "--x", "1", "--level", "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains("lower_family=B2"), "{text}");
    assert!(!text.contains("upper_family=B0"), "{text}");
}

#[test]
fn invalid_requests_exit_2() {
    let out = run(&[
        "enclose", "--kind", "I", "--nu", "-1", "--x", "1", "--level", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "enclose", "--kind", "I", "--nu", "0.3", "--x", "1", "--family", "b", "--alpha", "0",
        "--side", "upper",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("nu >= 1/2"), "{err}");
}

#[test]
fn unchecked_evaluates_and_marks_invalid() {
    let out = run(&[
        "enclose",
        "--kind",
        "I",
        "--nu",
        "0.3",
        "--x",
        "1",
        "--family",
        "b",
        "--alpha",
        "0",
        "--side",
        "upper",
        "--unchecked",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("valid=false"), "{text}");
    assert!(text.contains("reason=\"nu >= 1/2\""), "{text}");
}

#[test]
fn sweep_writes_deterministic_csv() {
    let path = tmp_path("sweep.csv");
    let args = [
        "sweep",
        "--kind",
        "I",
        "--nu",
        "1",
        "--x-log",
        "1e-3:1e3:25",
        "--level",
        "1",
        "--oracle",
        "--out",
        path.to_str().unwrap(),
    ];
    let out = run(&args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let first = std::fs::read(&path).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "nu,x,lower,upper,gap,lower_family,upper_family,oracle,lower_margin,upper_margin"
    );
    assert_eq!(text.lines().count(), 26);
    // Margins are nonnegative when the oracle is inside the enclosure.
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 10);
        let lower_margin: f64 = fields[8].parse().unwrap();
        let upper_margin: f64 = fields[9].parse().unwrap();
        assert!(lower_margin >= 0.0 && upper_margin >= 0.0, "{line}");
    }

    let out = run(&args);
    assert!(out.status.success());
    let second = std::fs::read(&path).unwrap();
    assert_eq!(first, second, "repeated sweeps must be byte-identical");
    std::fs::remove_file(&path).ok();
}

#[test]
fn sweep_json_mirrors_csv_fields() {
    let path = tmp_path("sweep.json");
    let out = run(&[
        "sweep",
        "--kind",
        "K",
        "--nu",
        "1,2",
        "--x",
        "0.5,1,2",
        "--level",
        "1",
        "--out",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0]["nu"], 1.0);
    assert_eq!(rows[0]["lower_family"], "d0");
    assert_eq!(rows[0]["upper_family"], "D0");
    assert!(rows[0]["gap"].as_f64().unwrap() > 0.0);
    std::fs::remove_file(&path).ok();
}

#[test]
fn sweep_without_x_grid_exits_2() {
    let path = tmp_path("sweep-empty.csv");
    let out = run(&[
        "sweep",
        "--kind",
        "I",
        "--nu",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cfbench_orders_policies_and_survives_unreachable_tolerance() {
    let out = run(&["cfbench", "--nu", "1", "--x", "1,10,100", "--tol", "1e-10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.lines().next().unwrap().starts_with("x\tzero\tb\tB"),
        "{text}"
    );
    for line in text.lines().skip(1) {
        if line.contains("e1") || line.contains("e2") {
            assert!(line.ends_with("ok"), "{line}");
        }
    }

    let out = run(&["cfbench", "--nu", "1", "--x", "1", "--tol", "1e-30"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("err"));

    let out = run(&["cfbench", "--nu", "1", "--x", "5", "--policies", "b"]);
    assert!(out.status.success());
}

#[test]
fn verify_cf_suite_at_gap_formula_point() {
    let out = run(&["verify", "--suite", "cf", "--nu", "1", "--x", "50"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS approximant-gap-formula"), "{text}");
}

#[test]
fn verify_identities_suite_passes() {
    let out = run(&[
        "verify",
        "--suite",
        "identities",
        "--nu",
        "1,2",
        "--x",
        "0.5,2,20",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("[suite identities]"));
    assert!(text.contains("PASS riccati-engine-equivalence"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn digits_env_override_is_honored() {
    let out = bin()
        .env("RATIO_BOUNDS_DIGITS", "25")
        .args([
            "enclose", "--kind", "I", "--nu", "1", "--x", "1", "--oracle",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("oracle=4.4638996589653"));
}

#[test]
fn unknown_suite_exits_2() {
    let out = run(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}
