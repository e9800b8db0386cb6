//! End-to-end tests of the `qctx` binary: exit codes, report layout, schema
//! validity, and byte-level determinism of the outputs.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qctx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qctx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

fn report_schema() -> jsonschema::Validator {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas/report.schema.json");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid_report(report: &Value) {
    let validator = report_schema();
    let errors: Vec<String> =
        validator.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

#[test]
fn verify_temporal_defaults_pass() {
    let output = qctx(&["verify-temporal"]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_valid_report(&report);
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["results"]["eigenvalues"], serde_json::json!([-1, 1, 1]));
    assert_eq!(report["results"]["assignments_found"], serde_json::json!(0));
    assert_eq!(report["results"]["certificate"], serde_json::json!([1, 2, 3]));
}

#[test]
fn verify_temporal_accepts_any_quarter_turn_separation() {
    let output = qctx(&["verify-temporal", "--theta1", "pi/2", "--theta2", "pi"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_json(&output)["verdict"], "pass");
}

#[test]
fn verify_temporal_rejects_non_commuting_angles_with_exit_two() {
    let output = qctx(&["verify-temporal", "--theta2", "pi/4"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(output.stdout.is_empty(), "no report on rejection");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("commute"), "diagnostic names the failure: {stderr}");
}

#[test]
fn malformed_angle_text_is_a_usage_error() {
    let output = qctx(&["verify-temporal", "--theta2", "half a turn"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_flags_exit_two() {
    let output = qctx(&["verify-temporal", "--frequency", "3"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_spatial_reports_singlet_eigenvalues() {
    let output = qctx(&["verify-spatial"]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_valid_report(&report);
    assert_eq!(report["results"]["eigenvalues"], serde_json::json!([-1, -1, -1]));
    assert_eq!(report["results"]["assignments_found"], serde_json::json!(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let first = qctx(&["verify-spatial"]);
    let second = qctx(&["verify-spatial"]);
    assert_eq!(first.stdout, second.stdout);

    let sim_args = ["simulate", "--trials", "200", "--seed", "7"];
    let third = qctx(&sim_args);
    let fourth = qctx(&sim_args);
    assert_eq!(third.stdout, fourth.stdout);
}

#[test]
fn simulate_reports_deterministic_products() {
    let output = qctx(&["simulate", "--trials", "500", "--seed", "42"]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_valid_report(&report);
    let summaries = report["results"]["summaries"].as_array().unwrap();
    assert_eq!(summaries.len(), 3);
    assert_eq!(summaries[0]["product_histogram"]["-1"], serde_json::json!(500));
    assert_eq!(summaries[1]["product_histogram"]["+1"], serde_json::json!(500));
}

#[test]
fn simulate_writes_csv_and_json_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("trials.csv");
    let json_path = dir.path().join("report.json");
    let output = qctx(&[
        "simulate",
        "--trials",
        "25",
        "--seed",
        "3",
        "--csv",
        csv_path.to_str().unwrap(),
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("trial,context_id,outcome_t1,outcome_t2,product"));
    assert_eq!(csv.lines().count(), 1 + 3 * 25, "header plus all contexts");

    let file_report = std::fs::read(&json_path).unwrap();
    assert_eq!(file_report, output.stdout, "file copy matches stdout bytes");
}

#[test]
fn simulate_usage_errors_exit_two() {
    assert_eq!(qctx(&["simulate", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(qctx(&["simulate", "--state", "sideways"]).status.code(), Some(2));
    assert_eq!(
        qctx(&["simulate", "--variant", "temporal", "--state", "singlet"]).status.code(),
        Some(2)
    );
}

#[test]
fn simulate_spatial_singlet_passes() {
    let output = qctx(&["simulate", "--variant", "spatial", "--trials", "300"]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_eq!(report["parameters"]["state"], "singlet");
    let summaries = report["results"]["summaries"].as_array().unwrap();
    for summary in summaries {
        assert_eq!(summary["product_histogram"]["-1"], serde_json::json!(300));
    }
}

#[test]
fn scan_grid_behaviour() {
    let output = qctx(&["scan", "--grid", "360"]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_valid_report(&report);
    assert_eq!(report["results"]["accepted_indices"], serde_json::json!([90, 270]));

    let coarse = qctx(&["scan", "--grid", "7"]);
    assert_eq!(coarse.status.code(), Some(2));

    let miss = qctx(&["scan", "--grid", "9"]);
    assert_eq!(miss.status.code(), Some(0));
    let miss_report = stdout_json(&miss);
    assert_eq!(miss_report["results"]["accepted_indices"], serde_json::json!([]));
    assert!(!miss_report["results"]["notes"].as_array().unwrap().is_empty());

    // Finer grids place points inside the sliver where the flat norm bound
    // cannot hold; those must be excluded rather than failing the sweep.
    let fine = qctx(&["scan", "--grid", "720"]);
    assert_eq!(fine.status.code(), Some(0), "fine grid must still pass");
    let fine_report = stdout_json(&fine);
    assert_eq!(fine_report["results"]["accepted_indices"], serde_json::json!([180, 540]));
    assert_eq!(fine_report["verdict"], "pass");
}

#[test]
fn nchv_subcommand_decides_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("system.json");
    std::fs::write(
        &path,
        r#"{
            "variables": ["m_x^1", "m_x^2", "m_y^1", "m_y^2"],
            "constraints": [
                {"vars": ["m_x^2", "m_y^1"], "sign": -1},
                {"vars": ["m_y^2", "m_x^1"], "sign": 1},
                {"vars": ["m_x^2", "m_y^2", "m_y^1", "m_x^1"], "sign": 1}
            ]
        }"#,
    )
    .unwrap();
    let output = qctx(&["nchv", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let report = stdout_json(&output);
    assert_valid_report(&report);
    assert_eq!(report["results"]["satisfiable"], serde_json::json!(false));
    assert_eq!(report["results"]["certificate"], serde_json::json!([1, 2, 3]));

    // A satisfiable system also exits 0; the verdict tracks decider
    // agreement, not satisfiability.
    let sat_path = dir.path().join("sat.json");
    std::fs::write(
        &sat_path,
        r#"{"variables": ["a", "b"], "constraints": [{"vars": ["a", "b"], "sign": -1}]}"#,
    )
    .unwrap();
    let sat = qctx(&["nchv", sat_path.to_str().unwrap()]);
    assert_eq!(sat.status.code(), Some(0));
    let sat_report = stdout_json(&sat);
    assert_eq!(sat_report["results"]["satisfiable"], serde_json::json!(true));
    assert_eq!(sat_report["results"]["assignments_found"], serde_json::json!(2));

    assert_eq!(qctx(&["nchv", "/no/such/file.json"]).status.code(), Some(2));
    let bad_path = dir.path().join("bad.json");
    std::fs::write(&bad_path, "{oops}").unwrap();
    assert_eq!(qctx(&["nchv", bad_path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn all_reports_validate_against_the_published_schema() {
    let validator = report_schema();
    let dir = tempfile::tempdir().unwrap();
    let nchv_path = dir.path().join("system.json");
    std::fs::write(
        &nchv_path,
        r#"{"variables": ["a"], "constraints": [{"vars": ["a"], "sign": 1}]}"#,
    )
    .unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["verify-temporal"],
        vec!["verify-temporal", "--theta1", "pi/4", "--theta2", "3pi/4"],
        vec!["verify-spatial"],
        vec!["simulate", "--trials", "50"],
        vec!["simulate", "--variant", "spatial", "--trials", "50", "--state", "upup"],
        vec!["simulate", "--trials", "50", "--state", "random:9"],
        vec!["scan", "--grid", "12"],
        vec!["nchv", nchv_path.to_str().unwrap()],
    ];
    for args in invocations {
        let output = qctx(&args);
        assert_eq!(output.status.code(), Some(0), "{args:?}");
        let report = stdout_json(&output);
        let errors: Vec<String> =
            validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?} schema violations: {errors:?}");
    }
}
