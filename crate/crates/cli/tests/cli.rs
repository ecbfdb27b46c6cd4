use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_diophant"));
    cmd.env_remove("DIOPHANT_CONFIG");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn assert_schema(command: &str, report: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{command}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{command} report violates its schema: {errors:#?}");
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn find_approx_recovers_sqrt2() {
    let out = run(&["find-approx", "--digits", arg(&data("sqrt2.txt")), "--max-degree", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("find-approx", &v);
    assert_eq!(v["minpoly"], serde_json::json!(["-2", "0", "1"]));
    assert_eq!(v["degree"], 2);
    assert_eq!(v["exact"], false);
}

#[test]
fn find_approx_recovers_a_cubic() {
    let out = run(&["find-approx", "--digits", arg(&data("cbrt2_plus_one.txt")), "--max-degree", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["minpoly"], serde_json::json!(["-3", "3", "-3", "1"]));
}

#[test]
fn dist_dispatches_to_polynomial_and_cycle() {
    let out = run(&["dist", "--poly", arg(&data("f.json")), "--point", arg(&data("theta.json")), "--order", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("dist", &v);
    assert_eq!(v["kind"], "polynomial");
    assert_eq!(v["order"], 3);
    // theta is sqrt 2 to 65 digits, a zero of the polynomial.
    assert!(v["log_distance"].as_f64().unwrap() < -140.0);

    let out = run(&[
        "dist",
        "--cycle",
        arg(&data("point_cycle.json")),
        "--point",
        arg(&data("theta.json")),
        "--order",
        "1",
        "--weight",
        "2",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("dist", &v);
    assert_eq!(v["degree"], 2);
    let h = v["weighted"]["height"].as_f64().unwrap();
    assert!((h - (29401f64).ln()).abs() < 1e-12);
}

#[test]
fn norm_report_is_byte_identical_across_runs() {
    let poly = data("f.json");
    let args = ["norm", "--poly", arg(&poly), "--samples", "4096", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_schema("norm", &v);
    // |y^2 - 2x^2|^2 = 1/3 + 4/3 in the normalized monomial basis.
    assert!((v["log_l2"].as_f64().unwrap() - 0.5 * (5.0f64 / 3.0).ln()).abs() < 1e-12);
}

#[test]
fn mult_reports_order_and_bezout() {
    let out = run(&["mult", "--poly", arg(&data("conic.json")), "--point", arg(&data("origin.json")), "--with", arg(&data("line.json"))]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("mult", &v);
    assert_eq!(v["order"]["order"], 1);
    assert_eq!(v["bezout"]["holds"], true);
}

#[test]
fn derive_on_a_conic() {
    let out = run(&[
        "derive",
        "--variety",
        arg(&data("conic_variety.json")),
        "--poly",
        arg(&data("line.json")),
        "--index",
        "1",
        "--point",
        arg(&data("one.json")),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("derive", &v);
    // On z^2 = x y with base coordinate y/x, z/x = sqrt(y/x) has derivative 1/2 at y/x = 1.
    assert!((v["log_abs_value"].as_f64().unwrap() - 0.5f64.ln()).abs() < 1e-12);
}

#[test]
fn avoid_subspace_meets_its_bounds() {
    let out = run(&["avoid-subspace", "--variety", arg(&data("conic_variety.json")), "--codim", "2", "--samples", "2000"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("avoid-subspace", &v);
    assert_eq!(v["height_ok"], true);
    assert!(v["min_distance"].as_f64().unwrap() >= v["distance_bound"].as_f64().unwrap());
}

#[test]
fn exponent_scan_writes_cells_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("scan.svg");
    let out = run(&["exponent-scan", "--digits", arg(&data("sqrt2.txt")), "--max-degree", "2", "--heights", "5,10", "--svg", arg(&svg)]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("exponent-scan", &v);
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn check_criterion_exit_codes_follow_the_verdict() {
    let out = run(&["check-criterion", "--example", "positive-algind1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_schema("check-criterion", &v);
    assert_eq!(v["verdict"], "hypotheses-hold");

    let out = run(&["check-criterion", "--example", "degree-violation"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_schema("check-criterion", &v);
    assert_eq!(v["verdict"], "hypothesis-failed");
    assert_eq!(v["which"], "degree");
    assert_eq!(v["k"], 2);

    let out = run(&["check-criterion", "--example", "irregular-algind2"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_schema("check-criterion", &v);
    assert_eq!(v["verdict"], "inconclusive");
}

#[test]
fn saved_instance_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let svg = dir.path().join("limit.svg");
    let a = run(&["check-criterion", "--example", "positive-algind2", "--save-instance", arg(&inst), "--svg", arg(&svg)]);
    assert_eq!(a.status.code(), Some(0));
    assert!(svg.exists());
    let b = run(&["check-criterion", "--instance", arg(&inst), "--criterion", "algind2"]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn calibrate_reproduces_the_shipped_constants() {
    let dir = tempfile::tempdir().unwrap();
    let written = dir.path().join("calibration.json");
    let out = run(&["calibrate", "--write", arg(&written)]);
    assert!(out.status.success());
    let v = json(&out);
    assert_schema("calibrate", &v);
    let shipped: Value = serde_json::from_str(include_str!("../../core/data/calibration.json")).unwrap();
    let fresh: Value = serde_json::from_str(&std::fs::read_to_string(&written).unwrap()).unwrap();
    assert_eq!(fresh, shipped);
    assert_eq!(v["calibration"], shipped);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("norm.json");
    let out = run(&["norm", "--poly", arg(&data("f.json")), "--samples", "1024", "--out", arg(&path)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["degree"], 2);
}

#[test]
fn malformed_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"vars\": 2, \"degree\": 1, \"terms\": [{\"exp\": [2, 0], \"num\": \"1\", \"den\": \"1\"}]}").unwrap();
    let out = run(&["norm", "--poly", arg(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let out = run(&["norm", "--poly", arg(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn environment_config_overrides_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let bad = dir.path().join("bad.json");
    std::fs::write(&good, "{\"seed\": 11}").unwrap();
    std::fs::write(&bad, "{\"precision_bits\": 16}").unwrap();

    let with_flag = run(&["norm", "--poly", arg(&data("f.json")), "--samples", "1024", "--config", arg(&bad)]);
    assert_eq!(with_flag.status.code(), Some(1));

    let with_env = bin()
        .env("DIOPHANT_CONFIG", &good)
        .args(["norm", "--poly", arg(&data("f.json")), "--samples", "1024", "--config", arg(&bad)])
        .output()
        .unwrap();
    assert!(with_env.status.success());
    let seeded = run(&["norm", "--poly", arg(&data("f.json")), "--samples", "1024", "--seed", "11"]);
    assert_eq!(with_env.stdout, seeded.stdout);
}
