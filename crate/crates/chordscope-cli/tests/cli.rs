//! End-to-end command-line tests: output contracts, exit codes, and
//! determinism.

use std::io::Write;
use std::process::{Command, Output};

fn chordscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chordscope"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn chord_field_normalization_row() {
    let out = chordscope(&[
        "chord", "--state", "fock:n=3", "--n", "128", "--extent", "8", "--hbar", "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# space=chord\n"));
    // the origin sample (i = j = 64) carries χ(0) = 1/2πħ
    let origin_row = text
        .lines()
        .find(|l| l.starts_with("64,64,"))
        .expect("origin row present");
    let re: f64 = origin_row.split(',').nth(4).unwrap().parse().unwrap();
    assert!((re * 2.0 * std::f64::consts::PI - 1.0).abs() < 1e-8, "χ(0) = {re}");
}

#[test]
fn wigner_of_cat_matches_closed_form_at_origin() {
    let out = chordscope(&[
        "wigner", "--state", "cat:p=0,q=2,sign=+", "--n", "128",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let origin_row = text.lines().find(|l| l.starts_with("64,64,")).unwrap();
    let re: f64 = origin_row.split(',').nth(4).unwrap().parse().unwrap();
    // the even cat at η=(0,2) has W(0) = 1/π
    assert!((re - 1.0 / std::f64::consts::PI).abs() < 1e-8, "W(0) = {re}");
}

#[test]
fn missing_state_is_usage_error() {
    let out = chordscope(&["chord"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_state_recipe_exits_2() {
    let out = chordscope(&["chord", "--state", "nonsense:x=1", "--n", "64"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown state kind"));
}

#[test]
fn numeric_failure_exits_3() {
    // displaced packet far outside a narrow grid
    let out = chordscope(&["chord", "--state", "coherent:p=0,q=30", "--n", "64", "--extent", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn deterministic_output_bytes() {
    let args =
        ["chord", "--state", "cat:p=0,q=2,sign=-", "--n", "64", "--extent", "8", "--hbar", "0.5"];
    let a = chordscope(&args);
    let b = chordscope(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_cap_does_not_change_bytes() {
    let args = ["wigner", "--state", "fock:n=2", "--n", "64"];
    let base = chordscope(&args);
    let capped = Command::new(env!("CARGO_BIN_EXE_chordscope"))
        .args(args)
        .env("CHORDSCOPE_THREADS", "1")
        .output()
        .unwrap();
    assert!(base.status.success() && capped.status.success());
    assert_eq!(base.stdout, capped.stdout);
}

#[test]
fn correlate_fourier_invariance_check() {
    let out = chordscope(&[
        "correlate", "--state", "fock:n=3", "--check", "fourier-invariance", "--n", "256",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let residual = v["residual"].as_f64().unwrap();
    assert!(residual < 1e-6, "residual {residual}");
}

#[test]
fn correlate_report_fields() {
    let out = chordscope(&["correlate", "--state", "fock:n=1", "--n", "128"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let json_part: String = text.lines().take_while(|l| !l.starts_with('#')).collect();
    let v: serde_json::Value = serde_json::from_str(&json_part).unwrap();
    assert!((v["purity"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!(v["route_agreement_max_delta"].as_f64().unwrap() < 1e-6);
    assert!(text.contains("# space=chord"));
}

#[test]
fn parity_report_fock1() {
    let out = chordscope(&[
        "parity", "--state", "fock:n=1", "--centre", "0,0", "--n", "128",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["even_weight"].as_f64().unwrap().abs() < 1e-9);
    assert!((v["odd_weight"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(v["reality_defect"].as_f64().unwrap() < 1e-9);
}

#[test]
fn semiclassical_window_bounds() {
    // circle of action 50: ζ = 20, a = 1/20 → window (0.05, 20^{1/3})
    let out = chordscope(&["semiclassical", "--curve", "circle:I=50", "--window"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["xi_min"].as_f64().unwrap() - 0.05).abs() < 1e-9);
    assert!((v["xi_max"].as_f64().unwrap() - 20.0f64.powf(1.0 / 3.0)).abs() < 1e-6);
}

#[test]
fn semiclassical_sweep_with_exact_column() {
    let out = chordscope(&[
        "semiclassical", "--curve", "circle:I=50.5", "--sweep-dir", "0,1", "--compare", "exact",
        "--samples", "50",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("xi_len,exact_re,small_re,small_im,stationary_re,stationary_im,caustic"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("xi_len")).count(), 50);
}

#[test]
fn semiclassical_quartic_point() {
    let out = chordscope(&[
        "semiclassical", "--curve", "quartic:E=1", "--xi", "1,0", "--hbar", "0.1",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let re = v["re"].as_f64().unwrap();
    assert!((re.abs() - 0.2064062796885).abs() < 1e-6, "re = {re}");
}

#[test]
fn superpose_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("terms.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(f, r#"[{{"re":1,"im":0,"p":0,"q":2}},{{"re":1,"im":0,"p":0,"q":-2}}]"#).unwrap();
    let spec = format!("superpose:{}", path.display());
    let out = chordscope(&["chord", "--state", &spec, "--n", "128"]);
    assert!(out.status.success());
    // the two-packet even superposition equals the even cat
    let cat = chordscope(&["chord", "--state", "cat:p=0,q=2,sign=+", "--n", "128"]);
    assert_eq!(out.stdout, cat.stdout);
}

#[test]
fn validate_filter_runs_single_criterion() {
    let out = chordscope(&["validate", "--filter", "near-diameter"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[PASS] 11. near-diameter-action"));
}

#[test]
fn validate_detects_perturbed_fourier_normalization() {
    let out = chordscope(&[
        "validate", "--filter", "coherent-closed-forms", "--perturb-fourier", "1.01",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[FAIL]"));
}
