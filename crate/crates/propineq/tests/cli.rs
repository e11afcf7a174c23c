//! Black-box tests of the command-line binary: output shapes, determinism,
//! configuration precedence, and error reporting.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_propineq"))
}

/// Flags that keep a full audit under a second without changing its shape.
const FAST: [&str; 8] = [
    "--grid-n",
    "16384",
    "--x-extent",
    "200",
    "--convergence-tol",
    "3e-4",
    "--truncation-threshold",
    "1e-3",
];

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("propineq-test-{}-{name}", std::process::id()))
}

#[test]
fn help_lists_all_subcommands() {
    let out = run_ok(&["--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for sub in ["run", "figure", "sweep", "verify"] {
        assert!(text.contains(sub), "help is missing `{sub}`:\n{text}");
    }
}

#[test]
fn run_emits_stable_parsable_json() {
    let a = scratch("run-a.json");
    let b = scratch("run-b.json");
    let mut args = vec!["run"];
    args.extend_from_slice(&FAST);
    run_ok(&[&args[..], &["--out", a.to_str().unwrap()]].concat());
    run_ok(&[&args[..], &["--out", b.to_str().unwrap()]].concat());
    let text_a = fs::read_to_string(&a).unwrap();
    let text_b = fs::read_to_string(&b).unwrap();
    fs::remove_file(&a).ok();
    fs::remove_file(&b).ok();
    assert_eq!(text_a, text_b, "reruns must be byte-identical");
    assert!(text_a.ends_with('\n'));

    let doc: serde_json::Value = serde_json::from_str(&text_a).unwrap();
    for section in ["config", "scale_convention", "results", "diagnostics"] {
        assert!(doc.get(section).is_some(), "missing section {section}");
    }
    let results = &doc["results"];
    for key in [
        "s",
        "BL_over_2pi_hbar",
        "P_L",
        "P_B",
        "P_M",
        "analytic_P_L_B",
        "bound",
        "required_PM_analytic",
        "defect",
        "envelope_PM_bound",
    ] {
        assert!(results[key].is_f64(), "results.{key} missing or non-numeric");
    }
    assert_eq!(results["verdict"], "violated");
    assert_eq!(doc["scale_convention"]["units"], "reduced");
    assert!(doc["diagnostics"]["margin"].is_f64());
    assert!(doc["diagnostics"]["levels"].is_array());
}

#[test]
fn figure_csv_has_the_documented_shape() {
    let path = scratch("figure.csv");
    let mut args = vec!["figure"];
    args.extend_from_slice(&FAST);
    run_ok(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    let text = fs::read_to_string(&path).unwrap();
    fs::remove_file(&path).ok();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "x_over_L,density_times_L,analytic_density_times_L,envelope_times_L,rect_times_L"
    );
    assert_eq!(lines.len(), 2402, "header plus 2401 samples");
    assert!(lines[1].starts_with("-12.0,"));
    assert!(lines[2401].starts_with("12.0,"));
    // Center row: strong fringe, rect column at s/2.
    let center: Vec<f64> = lines[1201]
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(center[0], 0.0);
    assert!((center[1] - 0.0355).abs() < 2e-3, "measured center {}", center[1]);
    assert!((center[4] - 0.5 * 0.154_907_1).abs() < 1e-6);
    // Away from the pattern the rect column is zero.
    let edge: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(edge[4], "0.0");
}

#[test]
fn sweep_csv_is_ordered_with_empty_numeric_columns() {
    let path = scratch("sweep.csv");
    run_ok(&[
        "sweep",
        "--u-min",
        "0.01",
        "--u-max",
        "0.2",
        "--steps",
        "12",
        "--out",
        path.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&path).unwrap();
    fs::remove_file(&path).ok();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u,s,analytic_bound,numeric_defect,numeric_PM");
    assert_eq!(lines.len(), 13);
    let mut prev = f64::NEG_INFINITY;
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 5);
        let u: f64 = cols[0].parse().unwrap();
        assert!(u > prev, "u must increase: {line}");
        prev = u;
        assert!(cols[3].is_empty() && cols[4].is_empty(), "analytic mode: {line}");
    }
}

#[test]
fn sweep_rejects_a_degenerate_lattice() {
    let out = bin()
        .args(["sweep", "--steps", "1"])
        .output()
        .expect("binary runs");
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("steps"), "stderr: {err}");
}

#[test]
fn grid_size_flag_must_be_a_power_of_two() {
    let out = bin()
        .args(["run", "--grid-n", "12"])
        .output()
        .expect("binary runs");
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("grid_n"), "stderr: {err}");
}

#[test]
fn unreachable_working_point_is_a_config_error() {
    let out = bin()
        .args(["run", "--bl", "1e-6"])
        .output()
        .expect("binary runs");
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("2^24"), "stderr: {err}");
}

#[test]
fn flags_take_precedence_over_the_config_file() {
    let cfg_path = scratch("cfg.json");
    let out_path = scratch("cfg-run.json");
    fs::write(
        &cfg_path,
        r#"{"BL_over_2pi_hbar": 0.03, "grid_n": 16384, "x_extent_over_L": 200.0,
           "convergence_tol": 3e-4, "truncation_threshold": 1e-3}"#,
    )
    .unwrap();
    run_ok(&[
        "run",
        "--config",
        cfg_path.to_str().unwrap(),
        "--bl",
        "0.024",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    fs::remove_file(&cfg_path).ok();
    fs::remove_file(&out_path).ok();
    assert_eq!(doc["config"]["BL_over_2pi_hbar"], 0.024);
    assert_eq!(doc["config"]["grid_n"], 16384);
    assert_eq!(doc["config"]["x_extent_over_L"], 200.0);
}

#[test]
fn verify_passes_and_prints_one_line_per_check() {
    let mut args = vec!["verify"];
    args.extend_from_slice(&FAST);
    let out = run_ok(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    for check in [
        "norm_unit",
        "parseval",
        "unitarity",
        "probability_range",
        "marginal_consistency",
        "defect_identity",
        "truncation_within_threshold",
        "resolvability",
        "verdict_consistency",
    ] {
        assert!(
            text.contains(&format!("PASS {check}")),
            "missing PASS line for {check}:\n{text}"
        );
    }
    assert!(!text.contains("FAIL"), "unexpected failure:\n{text}");
}

#[test]
fn verify_fails_when_the_tolerance_cannot_resolve_the_bound() {
    let out = bin()
        .args([
            "verify",
            "--grid-n",
            "16384",
            "--x-extent",
            "200",
            "--truncation-threshold",
            "1e-3",
            "--convergence-tol",
            "1",
        ])
        .output()
        .expect("binary runs");
    assert!(
        !out.status.success(),
        "a margin larger than the bound must fail verification"
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL resolvability"), "stdout:\n{text}");
}
