use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn framekin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framekin")).args(args).output().expect("spawn framekin")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn num(v: &Value, key: &str) -> f64 {
    v["result"][key].as_f64().unwrap_or_else(|| panic!("missing result.{key}"))
}

#[test]
fn every_subcommand_reports_against_the_schema() {
    let validator = schema();
    let runs: [&[&str]; 8] = [
        &["decompose", "--a", "1e-3", "--u", "0.1005", "--frame", "z"],
        &["classify", "--model", "minkowski", "--frame", "rotating", "--omega", "0.1"],
        &["pirf-check", "--a", "1e-3"],
        &["geodesic", "--a", "1e-3", "--u", "0.1005", "--smax", "0.5", "--step", "0.01"],
        &["experiment"],
        &["normal-chart", "--a", "1e-2"],
        &["plli", "--a", "1e-3", "--v", "0.1"],
        &["equivalence", "--a", "1e-3", "--u", "0.1005"],
    ];
    for args in runs {
        let report = json(&framekin(args));
        assert_eq!(report["scenario"], args[0]);
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", args[0]);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(framekin(&["decompose"]).status.code(), Some(0));
    assert_eq!(framekin(&["--help"]).status.code(), Some(0));
    let unknown = framekin(&["warp-drive"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("plli"));
    assert_eq!(framekin(&["decompose", "--point", "1,2"]).status.code(), Some(2));
    assert_eq!(framekin(&["decompose", "--a", "1e-3", "--point", "-1000,0,0,0"]).status.code(), Some(2));
    assert_eq!(framekin(&["decompose", "--a", "1e-3", "--u", "0.1", "--v", "0.1"]).status.code(), Some(2));
    assert_eq!(framekin(&["decompose", "--frame", "nonesuch"]).status.code(), Some(2));
    assert_eq!(framekin(&["geodesic", "--a", "1e-3", "--step", "1e-9", "--smax", "100"]).status.code(), Some(3));
}

#[test]
fn plli_report_values() {
    let report = json(&framekin(&["plli", "--a", "1e-3", "--v", "0.1"]));
    assert_eq!(num(&report, "a"), 1e-3);
    assert_eq!(num(&report, "v"), 0.1);
    assert!((num(&report, "u") - 0.1 / (1.0_f64 - 0.01).sqrt()).abs() < 1e-15);
    assert!(num(&report, "theta_L").abs() < 1e-8);
    for key in ["theta_Lprime", "ratio_to_av2", "raw_theta_L", "raw_theta_Lprime"] {
        assert!(num(&report, key).is_finite(), "{key}");
    }
}

#[test]
fn decompose_inertial_frame_is_trivial() {
    let report = json(&framekin(&["decompose", "--model", "minkowski", "--point", "1,-2,3,0.5"]));
    for key in ["expansion", "shear_scalar", "vorticity_scalar", "acceleration_magnitude"] {
        assert_eq!(num(&report, key), 0.0, "{key}");
    }
}

#[test]
fn geodesic_csv_matches_closed_form() {
    let (a, u) = (1e-3, 0.1005);
    let out = framekin(&["geodesic", "--a", "1e-3", "--u", "0.1005", "--smax", "10", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let (ti, di) =
        (header.iter().position(|h| *h == "t").unwrap(), header.iter().position(|h| *h == "dx1_dt").unwrap());
    let mut rows = 0;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let r = 1.0 + a * cols[ti];
        let exact = u / (r * (r * r + u * u).sqrt());
        assert!((cols[di] - exact).abs() < 1e-8, "t = {}", cols[ti]);
        rows += 1;
    }
    assert_eq!(rows, 10_001);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"a": 2e-3, "v": 0.2, "point": [0.5, 0, 0, 0]}"#).unwrap();
    let config = config.to_str().unwrap();

    let from_file = json(&framekin(&["decompose", "--config", config, "--frame", "v"]));
    assert_eq!(from_file["input"]["a"].as_f64(), Some(2e-3));
    let theta = num(&from_file, "expansion");
    assert!((theta - 3.0 * 2e-3 / (1.0 + 2e-3 * 0.5)).abs() < 1e-12);

    let overridden = json(&framekin(&["decompose", "--config", config, "--frame", "v", "--a", "1e-3"]));
    assert_eq!(overridden["input"]["a"].as_f64(), Some(1e-3));
    assert_eq!(overridden["input"]["v"].as_f64(), Some(0.2));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"a": 1e-3, "acceleration": 4}"#).unwrap();
    assert_eq!(framekin(&["decompose", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(framekin(&["decompose", "--config", "/nonexistent/run.json"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = framekin(&["experiment", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(report["scenario"], "experiment");
}

#[test]
fn reports_are_deterministic() {
    let strip = |out: Output| {
        let mut v = json(&out);
        v.as_object_mut().unwrap().remove("wall_time");
        serde_json::to_string(&v).unwrap()
    };
    for args in
        [&["plli", "--a", "1e-3", "--v", "0.2"][..], &["experiment"], &["equivalence", "--a", "1e-3", "--u", "0.1"]]
    {
        assert_eq!(strip(framekin(args)), strip(framekin(args)), "{args:?}");
    }
}
