use std::path::PathBuf;

use serde_json::Value;

use qhmf_cli::problem::ProblemFile;
use qhmf_cli::report::Report;
use qhmf_core::{Complex64, GaussianRational};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

fn run(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["qhmf"];
    argv.extend_from_slice(args);
    let (code, out) = qhmf_cli::run(argv);
    (code, serde_json::from_str(&out).expect("report is JSON"))
}

fn on(cmd: &[&str], file: &str) -> (i32, Value) {
    let path = fixture(file);
    let mut args = cmd.to_vec();
    args.push(path.to_str().unwrap());
    run(&args)
}

/// Writes `text` to a scratch file named after the calling test.
fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qhmf-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, text).unwrap();
    path
}

fn run_text(name: &str, cmd: &[&str], text: &str) -> (i32, Value) {
    let path = scratch(name, text);
    let mut args = cmd.to_vec();
    args.push(path.to_str().unwrap());
    run(&args)
}

#[test]
fn canonical_exit_codes() {
    assert_eq!(on(&["optimize", "--direction", "min"], "p_scalar.json").0, 0);
    let (code, r) = on(&["optimize", "--direction", "max"], "p_scalar.json");
    assert_eq!(code, 1);
    assert_eq!(r["status"], "infeasible");
    assert!(r["message"].as_str().unwrap().contains("no global maximum"));
    let (code, r) = run_text("bad_literal", &["extremal"], r#"{"mode":"exact","kind":"single","A":[["1"]],"B":[["1"]],"C":[["1"]],"D":[["1//2"]],"M":[["1"]]}"#);
    assert_eq!(code, 2);
    assert!(r["message"].as_str().unwrap().contains("D[0][0]"));
}

#[test]
fn every_fixture_verifies() {
    for f in fixtures() {
        let (code, r) = run(&["verify", "--seed", "0", f.to_str().unwrap()]);
        assert_eq!(code, 0, "{}: {}", f.display(), r["message"]);
        assert_eq!(r["status"], "ok");
        assert!(r["verification"].is_object());
    }
}

#[test]
fn fixtures_round_trip_through_the_problem_types() {
    for f in fixtures() {
        let text = std::fs::read_to_string(&f).unwrap();
        let file = ProblemFile::from_json(&text).unwrap();
        match file.mode {
            qhmf_core::Mode::Exact => {
                let p = file.parse::<GaussianRational>().unwrap();
                let again = ProblemFile::from_problem(&p);
                assert_eq!(again.parse::<GaussianRational>().unwrap(), p, "{}", f.display());
                assert_eq!(ProblemFile::from_json(&again.to_json()).unwrap(), again);
            }
            qhmf_core::Mode::Float => {
                let p = file.parse::<Complex64>().unwrap();
                let again = ProblemFile::from_problem(&p);
                assert_eq!(again.parse::<Complex64>().unwrap(), p, "{}", f.display());
            }
        }
    }
}

#[test]
fn report_round_trips_through_json() {
    let path = fixture("nd.json");
    let (_, text) = qhmf_cli::run(["qhmf", "extremal", path.to_str().unwrap()]);
    let report: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(report.to_json(), text);
}

#[test]
fn unweighted_least_squares_value() {
    let (code, r) = on(&["lstsq"], "lstsq.json");
    assert_eq!(code, 0);
    let l = &r["lstsq"];
    assert_eq!(l["family"]["particular"], serde_json::json!([["2"]]));
    assert_eq!(l["trace_value"], "2");
    assert_eq!(l["rank_bounds"], serde_json::json!({"max": 1, "min": 1}));
    assert_eq!(l["sandwich_agrees"], true);
}

#[test]
fn weighted_least_squares_value() {
    // minimises (1-x, 3-x) [[2,1],[1,1]] (1-x, 3-x)^T, stationary at x = 9/5
    let (code, r) = on(&["lstsq", "--weighted"], "weighted.json");
    assert_eq!(code, 0);
    assert_eq!(r["lstsq"]["family"]["particular"], serde_json::json!([["9/5"]]));
    assert_eq!(r["lstsq"]["weighted"]["side"], "left");
}

#[test]
fn optimize_reports_a_certificate() {
    let (code, r) = on(&["optimize", "--direction", "max"], "nd.json");
    assert_eq!(code, 0, "{}", r["message"]);
    assert!(r["optimum"]["value"].is_array());
    let (code, r) = on(&["optimize", "--direction", "min"], "nd.json");
    assert_eq!(code, 1);
    assert!(r["optimum"]["infeasible"].is_object());
}

#[test]
fn multi_and_multiterm_dispatch() {
    assert_eq!(on(&["multi-optimize", "--direction", "min"], "multi.json").0, 0);
    assert_eq!(on(&["multi-optimize", "--direction", "max"], "multi.json").0, 1);
    let (code, r) = on(&["multi-optimize", "--direction", "min"], "multiterm.json");
    assert!(code == 0 || code == 1);
    assert_ne!(r["status"], "verification_failed");
}

#[test]
fn wrong_kind_is_an_input_error() {
    assert_eq!(on(&["lstsq"], "p_scalar.json").0, 2);
    assert_eq!(on(&["optimize", "--direction", "min"], "lstsq.json").0, 2);
}

#[test]
fn unknown_field_is_rejected() {
    let (code, r) = run_text(
        "unknown_field",
        &["extremal"],
        r#"{"mode":"exact","kind":"single","A":[["1"]],"B":[["1"]],"C":[["1"]],"D":[["1"]],"M":[["1"]],"E":[["1"]]}"#,
    );
    assert_eq!(code, 2);
    assert_eq!(r["status"], "input_error");
}

#[test]
fn dimension_mismatch_is_rejected() {
    let (code, _) = run_text(
        "mismatch",
        &["extremal"],
        r#"{"mode":"exact","kind":"single","A":[["1"],["2"]],"B":[["1"]],"C":[["1"]],"D":[["1"]],"M":[["1"]]}"#,
    );
    assert_eq!(code, 2);
}

#[test]
fn non_hermitian_weight_is_rejected() {
    let (code, _) = run_text(
        "nonhermitian",
        &["extremal"],
        r#"{"mode":"exact","kind":"single","A":[["1"]],"B":[["1","0"]],"C":[["1","0"]],"D":[["1"]],"M":[["1","2"],["3","1"]]}"#,
    );
    assert_eq!(code, 2);
}

#[test]
fn side_requires_weighted() {
    assert_eq!(on(&["lstsq", "--side", "left"], "weighted.json").0, 2);
}

#[test]
fn missing_file_is_an_input_error() {
    let (code, r) = run(&["extremal", "/nonexistent/problem.json"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "input_error");
}

#[test]
fn bad_grid_is_an_input_error() {
    assert_eq!(on(&["verify", "--grid", "1,x"], "p_scalar.json").0, 2);
}

#[test]
fn small_grid_is_exhaustive() {
    let (code, r) = on(&["verify", "--grid", "0,1,-1,1i,-1i,2"], "p_scalar.json");
    assert_eq!(code, 0, "{}", r["message"]);
    assert_eq!(r["verification"]["exhaustive"], true);
}

#[test]
fn float_mode_runs_the_same_commands() {
    for cmd in [&["extremal"][..], &["classify"], &["convexity"]] {
        let (code, r) = on(cmd, "float.json");
        assert_eq!(code, 0, "{cmd:?}: {}", r["message"]);
        assert_eq!(r["problem"]["mode"], "float");
    }
}

#[test]
fn extremal_reports_linearization_agreement() {
    let (code, r) = on(&["extremal"], "p_scalar.json");
    assert_eq!(code, 0);
    let e = &r["extremal"];
    assert!(e.is_object());
    assert_eq!(e["linearization_agrees"], true);
}

#[test]
fn selftest_passes() {
    let (code, r) = run(&["identities-selftest", "--seed", "3", "--cases", "30"]);
    assert_eq!(code, 0, "{}", r["selftest"]);
    assert_eq!(r["selftest"]["cases"], 30);
}

#[test]
fn help_exits_zero() {
    let (code, out) = qhmf_cli::run(["qhmf", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}
