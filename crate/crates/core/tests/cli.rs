use std::process::Command;

use serde_json::Value;

fn singosc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_singosc"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON")
}

#[test]
fn coeffs_report_and_exit_code() {
    let (code, out, _) = singosc(&["coeffs", "--alpha", "1", "--order", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["command"], "coeffs");
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["rows"][1]["b_im"].as_f64(), Some(-1.0));
    for key in ["command", "parameters", "rows", "verdict", "tolerances"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn irrational_alpha_has_no_log_coefficients() {
    let (code, out, _) = singosc(&["coeffs", "--alpha-irrational", "1.4142135623730951", "--order", "3"]);
    assert_eq!(code, 0);
    let v = json(&out);
    for row in v["rows"].as_array().unwrap().iter().skip(1) {
        assert_eq!(row["b_re"].as_f64(), Some(0.0));
        assert_eq!(row["b_im"].as_f64(), Some(0.0));
    }
}

#[test]
fn eval_is_inconclusive_and_conjugate_symmetric() {
    let (code, plus, _) = singosc(&["eval", "--alpha", "1", "--t", "1e-4"]);
    assert_eq!(code, 3);
    let (code, minus, _) = singosc(&["eval", "--alpha", "1", "--t", "-1e-4"]);
    assert_eq!(code, 3);
    let (p, m) = (json(&plus), json(&minus));
    assert_eq!(p["rows"][0]["oracle_re"], m["rows"][0]["oracle_re"]);
    assert_eq!(
        p["rows"][0]["oracle_im"].as_f64().unwrap(),
        -m["rows"][0]["oracle_im"].as_f64().unwrap()
    );
}

#[test]
fn eval_at_zero_has_zero_difference() {
    let (_, out, _) = singosc(&["eval", "--alpha", "2", "--t", "0"]);
    assert_eq!(json(&out)["rows"][0]["abs_diff"].as_f64(), Some(0.0));
}

#[test]
fn failing_experiment_exits_two() {
    let (code, out, _) = singosc(&["verify-limits", "--alpha", "1", "--tmin", "1e-5", "--tmax", "1e-2", "--points", "4"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["verdict"], "fail");
}

#[test]
fn decay_below_one_is_inconclusive() {
    let (code, out, _) = singosc(&["verify-decay", "--alpha", "1", "--tmin", "0.5", "--tmax", "50"]);
    assert_eq!(code, 3);
    assert_eq!(json(&out)["verdict"], "inconclusive");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(singosc(&["coeffs"]).0, 1);
    assert_eq!(singosc(&["coeffs", "--alpha", "0/1"]).0, 1);
    assert_eq!(singosc(&["no-such-command"]).0, 1);
    assert_eq!(singosc(&["coeffs", "--alpha", "1", "--amplitude", "{\"coeffs\": \"x\"}"]).0, 1);
    assert_eq!(singosc(&["coeffs", "--alpha", "1", "--amplitude", "/no/such/file.json"]).0, 1);
    assert_eq!(singosc(&["verify-limits", "--alpha", "2", "--tmin", "1e-2", "--tmax", "1e-3"]).0, 1);
    assert_eq!(singosc(&["--help"]).0, 0);
}

#[test]
fn csv_output_has_documented_header() {
    let (code, out, _) = singosc(&["verify-fresnel", "--alphas", "0.5", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("alpha,sign,oracle_re,oracle_im,oracle_err,closed_re,closed_im,rel_err,explicit_rel_err,ok")
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn amplitude_inline_and_from_file_agree() {
    let spec = r#"{"coeffs":[1.0,0.5],"inner":0.5,"outer":1.5}"#;
    let dir = std::env::temp_dir().join(format!("singosc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("amp.json");
    std::fs::write(&file, spec).unwrap();
    let (_, inline, _) = singosc(&["coeffs", "--alpha", "2", "--amplitude", spec]);
    let (_, from_file, _) = singosc(&["coeffs", "--alpha", "2", "--amplitude", file.to_str().unwrap()]);
    assert_eq!(inline, from_file);
    // φ'(0) = 0.5 switches on B_2 for α = 2.
    assert_eq!(json(&inline)["rows"][2]["b_im"].as_f64(), Some(-0.25));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("singosc-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let (code, stdout, _) = singosc(&["coeffs", "--alpha", "3/2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(json(&written)["parameters"]["alpha"], "3/2");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        &["laplace", "--alpha", "2", "--points", "5"][..],
        &["verify-remainder", "--alpha", "1", "--tmax", "1e-2", "--points", "5"][..],
    ] {
        let first = singosc(args);
        let second = singosc(args);
        assert_eq!(first.1, second.1, "{args:?}");
        assert_eq!(first.0, second.0);
    }
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let (_, out, _) = singosc(&["coeffs", "--alpha", "2", "--order", "1"]);
    let v = json(&out);
    let a1 = v["rows"][1]["a_re"].as_f64().unwrap();
    assert!((a1 + (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-14);
    assert!(out.contains("-1.2533141373155"), "{out}");
    let digits = out.split("\"a_re\":").nth(2).unwrap().split('e').next().unwrap();
    assert_eq!(digits.trim_start_matches('-').replace('.', "").len(), 17, "{digits}");
}

#[test]
fn passing_verdicts_survive_tighter_quadrature() {
    for args in [
        &["verify-limits", "--alpha", "2", "--points", "5"][..],
        &["verify-fresnel"][..],
    ] {
        assert_eq!(singosc(args).0, 0, "{args:?}");
        let mut tight = args.to_vec();
        tight.extend(["--tol-abs", "1e-13", "--tol-rel", "1e-11"]);
        assert_eq!(singosc(&tight).0, 0, "{tight:?}");
    }
}
