use std::process::{Command, Output};

use bowcalc_core::verify::IdentityRecord;
use serde_json::Value;

const RUNNING: &str = "r=1,1,2,1;c=2,2,1";

fn bowcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bowcalc")).args(args).output().expect("run bowcalc")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = bowcalc(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn parse_reports_charges_and_mirror() {
    let v = json(&["parse", "/1/2\\1\\"]);
    assert_eq!(v["r"], serde_json::json!([1, 1]));
    assert_eq!(v["c"], serde_json::json!([1, 1]));
    assert_eq!(v["d"], serde_json::json!([0, 1, 2, 1, 0]));
    let v = json(&["parse", RUNNING]);
    assert_eq!(v["mirror"]["r"], serde_json::json!([3, 2, 2]));
    assert_eq!(v["mirror"]["c"], serde_json::json!([2, 1, 2, 2]));
}

#[test]
fn fixed_point_counts() {
    for (diagram, count) in [("/1/2\\1\\", 2), ("/1/2\\", 1), (RUNNING, 12)] {
        let v = json(&["fixed-points", diagram]);
        assert_eq!(v["count"], count, "{diagram}");
        assert_eq!(v["fixed_points"].as_array().unwrap().len(), count);
    }
}

#[test]
fn cohomological_w_on_the_cotangent_line() {
    let out = bowcalc(&["stab", "/1/2\\1\\", "2", "--flavor", "H"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("t_{-1,1} - a_2 + hbar"), "{}", stdout(&out));
}

#[test]
fn one_point_space_restricts_to_one() {
    let out = bowcalc(&["restrict", "/1/2\\", "1", "1", "--flavor", "H"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim_end().ends_with("= 1"), "{}", stdout(&out));
}

#[test]
fn input_errors_exit_with_three() {
    for args in [
        &["parse", "/1/x"][..],
        &["restrict", "/1/2\\", "1", "7"],
        &["fixed-points", "/1/2\\", "5"],
        &["stab", "/1/2\\1\\", "1", "--flavor", "Q"],
        &["stab", "/1/2\\1\\", "1", "--chamber", "1,1"],
        &["limits", "/1/2\\1\\", "--slopes", "1/0"],
    ] {
        let out = bowcalc(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn failed_certification_exits_with_two() {
    let out = bowcalc(&["mirror-identity", RUNNING, "1", "4", "--points", "2", "--hbar", "off"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bowcalc(&["mirror-identity", RUNNING, "1", "4", "--points", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["mirror-identity", RUNNING, "4", "10", "--points", "3", "--format", "json", "--seed", "7"];
    let (a, b) = (bowcalc(&args), bowcalc(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let args = ["verify-axioms", "/1/2/3\\2\\1\\", "--points", "3", "--format", "json"];
    assert_eq!(bowcalc(&args).stdout, bowcalc(&args).stdout);
}

#[test]
fn identity_json_round_trips_through_the_library_type() {
    let v = json(&["mirror-identity", RUNNING, "1", "4", "--points", "2"]);
    let rec: IdentityRecord = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(rec.ids, (1, 4));
    assert!(rec.certification.certified);
    assert_eq!(rec.uniform_shape(), Some((3, 4)));
    let again = serde_json::to_value(&rec).unwrap();
    for key in ["terms", "mirror_terms", "certification", "f", "g"] {
        assert_eq!(again[key], v[key], "{key}");
    }
}

#[test]
fn latex_is_written_to_a_file() {
    let dir = std::env::temp_dir().join(format!("bowcalc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("identity.tex");
    let out = bowcalc(&["mirror-identity", RUNNING, "1", "4", "--points", "2", "--format", "latex", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let tex = std::fs::read_to_string(&path).unwrap();
    assert!(tex.trim_end().ends_with("=0"), "{tex}");
    assert_eq!(tex.matches("\\\\").count(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn latex_is_rejected_for_other_commands() {
    let out = bowcalc(&["parse", RUNNING, "--format", "latex"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn wheel_check_and_sweep_pass() {
    let out = bowcalc(&["wheel-check", RUNNING, "10", "--points", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v = json(&["sweep", "--max-m", "2", "--max-n", "3", "--max-boxes", "4", "--points", "3"]);
    assert_eq!(v["pass"], true);
    assert!(v["shapes"].as_array().unwrap().iter().any(|p| p["terms"] == 3 && p["factors"] == 4));
}

#[test]
fn limits_report_exact_cohomological_limit() {
    let out = bowcalc(&["limits", "r=2,1;c=1,1,1", "--slopes", "456/997", "--points", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["k_to_h_exact"], true);
    assert_eq!(v["monotone"], true);
    // The residual at the smallest nome stays above the default tolerance,
    // which the exit status reports as a failed check.
    assert!(v["final_residual"].as_f64().unwrap() > 1e-6);
    assert_eq!(out.status.code(), Some(2));
}
