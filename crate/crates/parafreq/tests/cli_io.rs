//! Experiment-runner integration: CSV/JSON artifacts, determinism, config
//! handling, and the public flag surface of the `parafreq` binary.

use std::fs;
use std::process::Command;

use parafreq::cli::{emit_trace, main_from_args, run, ExperimentConfig};
use parafreq::evolve::caloric_polynomial;
use parafreq::frequency::trace;
use parafreq::{Background, TraceOptions};

fn base_config(experiment: &str, background: &str) -> ExperimentConfig {
    let mut cfg = default_cfg(background);
    cfg.experiment = experiment.to_string();
    cfg
}

fn default_cfg(background: &str) -> ExperimentConfig {
    // mirror the CLI defaults through the JSON config path
    let (t1, window) = match background {
        "sphere" => (1.0, (-1.0, 0.5)),
        _ => (0.0, (-2.0, -1.0)),
    };
    ExperimentConfig {
        experiment: "monotonicity".into(),
        background: background.into(),
        dim: 1,
        t1,
        center: 0.0,
        circle_length: 2.0 * std::f64::consts::PI,
        c0: 4.0,
        degrees: vec![2],
        modes: vec![],
        alpha0: 0.0,
        beta0: 0.0,
        perturb_shape: "const".into(),
        window,
        samples: 64,
        order: None,
        truncation: 8,
        eps: None,
        seed: 0,
        tau: 1.0,
        n_max: 6,
        basis: "hermite".into(),
        corrupt: false,
        parallel: false,
        out_csv: None,
        out_json: None,
        tolerance_scale: 1.0,
    }
}

#[test]
fn csv_header_and_caloric_values() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("trace.csv");
    let mut cfg = base_config("monotonicity", "gaussian");
    cfg.degrees = vec![2];
    cfg.order = Some(12);
    cfg.out_csv = Some(csv_path.display().to_string());
    let (report, _) = run(&cfg).unwrap();
    assert!(report.all_passed());

    let text = fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,tau,I,D,kappa,Ecorr,U,U_fd_prime");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 64);
    // caloric k=2: I = 8 tau^2, D = -8 tau^2, U = -1; last row has tau = 1
    let last: Vec<f64> = rows[63].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[1] - 1.0).abs() < 1e-12, "tau {}", last[1]);
    assert!((last[2] - 8.0).abs() < 1e-9, "I {}", last[2]);
    assert!((last[3] + 8.0).abs() < 1e-9, "D {}", last[3]);
    assert!((last[6] + 1.0).abs() < 1e-9, "U {}", last[6]);
    // round-trip: every printed value parses back to the same f64
    for row in rows {
        for v in row.split(',') {
            let x: f64 = v.parse().unwrap();
            assert_eq!(format!("{x}"), v);
        }
    }
}

#[test]
fn identical_config_gives_bit_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let json = dir.path().join("report.json");
    let mut outputs = Vec::new();
    for parallel in [false, false, true] {
        let mut cfg = base_config("monotonicity", "circle");
        cfg.window = (-1.0, -0.5);
        cfg.seed = 1234;
        cfg.samples = 32;
        cfg.parallel = parallel;
        cfg.out_csv = Some(csv.display().to_string());
        cfg.out_json = Some(json.display().to_string());
        run(&cfg).unwrap();
        outputs.push((fs::read(&csv).unwrap(), fs::read_to_string(&json).unwrap()));
    }
    assert_eq!(outputs[0].0, outputs[1].0, "CSV must be bit-identical");
    // parallel evaluation must not move a single bit of the trace
    assert_eq!(
        outputs[0].0, outputs[2].0,
        "parallel CSV must be bit-identical"
    );
    assert_eq!(outputs[0].1, outputs[1].1, "JSON must be bit-identical");
}

#[test]
fn json_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let mut cfg = base_config("ou-spectrum", "gaussian");
    cfg.out_json = Some(json_path.display().to_string());
    run(&cfg).unwrap();
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(value["experiment"], "ou-spectrum");
    assert!(value["config"].is_object());
    assert!(value["version"].is_string());
    let checks = value["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "passed", "lhs", "rhs", "margin", "tolerance"] {
            assert!(c.get(key).is_some(), "check missing key {key}");
        }
    }
    let eigs = value["eigenvalues"].as_array().unwrap();
    assert_eq!(eigs.len(), 7);
    assert!((eigs[6].as_f64().unwrap() + 3.0).abs() <= 1e-9);
}

#[test]
fn empty_trace_refused() {
    let bg = Background::gaussian(1, 0.0, [0.0; 3]).unwrap();
    let sol = caloric_polynomial(&bg, &[1], (-2.0, -1.0)).unwrap();
    let mut tr = trace(&sol, &TraceOptions::new(8).with_order(8)).unwrap();
    tr.samples.clear();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    assert!(emit_trace(&tr, &path).is_err());
    assert!(!path.exists());
}

#[test]
fn config_file_with_cli_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.json");
    let json_path = dir.path().join("report.json");
    fs::write(
        &cfg_path,
        r#"{ "experiment": "monotonicity", "background": "gaussian",
             "degrees": [3], "window": [-2.0, -1.0], "samples": 16, "order": 12 }"#,
    )
    .unwrap();
    // CLI overrides samples 16 -> 32
    let code = main_from_args([
        "parafreq",
        "run",
        "--config",
        cfg_path.to_str().unwrap(),
        "--samples",
        "32",
        "--out-json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(value["config"]["samples"], 32);
    assert_eq!(value["config"]["degrees"][0], 3);
}

#[test]
fn config_error_names_field() {
    let mut cfg = base_config("monotonicity", "gaussian");
    cfg.samples = 4;
    let err = run(&cfg).unwrap_err().to_string();
    assert!(err.contains("samples"), "got {err}");
}

#[test]
fn binary_caloric_cubic_has_constant_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cubic.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_parafreq"))
        .args([
            "run",
            "--experiment",
            "monotonicity",
            "--background",
            "gaussian",
            "--degree",
            "3",
            "--window",
            "-2:-1",
            "--samples",
            "64",
            "--order",
            "12",
            "--out-csv",
        ])
        .arg(&csv)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&csv).unwrap();
    for line in text.lines().skip(1) {
        let u: f64 = line.split(',').nth(6).unwrap().parse().unwrap();
        assert!((u + 1.5).abs() <= 1e-9, "U = {u}");
    }
}

#[test]
fn binary_corrupt_run_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("bad.json");
    let output = Command::new(env!("CARGO_BIN_EXE_parafreq"))
        .args([
            "run",
            "--experiment",
            "monotonicity",
            "--background",
            "circle",
            "--window",
            "-1:-0.5",
            "--modes",
            "0,1,0.5",
            "--samples",
            "32",
            "--corrupt",
            "--out-json",
        ])
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let checks = value["checks"].as_array().unwrap();
    assert!(!checks[0]["passed"].as_bool().unwrap());
    assert!(checks[0]["name"]
        .as_str()
        .unwrap()
        .contains("frequency decreased"));
}

#[test]
fn binary_ou_spectrum_emits_eigenvalues() {
    let output = Command::new(env!("CARGO_BIN_EXE_parafreq"))
        .args([
            "run",
            "--experiment",
            "ou-spectrum",
            "--tau",
            "1",
            "--n-max",
            "6",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    let line = stdout
        .lines()
        .find(|l| l.starts_with("eigenvalues:"))
        .unwrap_or_else(|| panic!("no eigenvalues line in: {stdout}"));
    let eigs: Vec<f64> = line
        .trim_start_matches("eigenvalues: [")
        .trim_end_matches(']')
        .split(", ")
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(eigs.len(), 7);
    for (j, e) in eigs.iter().enumerate() {
        assert!((e + j as f64 / 2.0).abs() <= 1e-8, "eigenvalue {j}: {e}");
    }
}

#[test]
fn tolerance_scale_env_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("scaled.json");
    let status = Command::new(env!("CARGO_BIN_EXE_parafreq"))
        .env("PARAFREQ_TOLERANCE_SCALE", "10")
        .args([
            "run",
            "--experiment",
            "ou-spectrum",
            "--tau",
            "1",
            "--n-max",
            "4",
            "--out-json",
        ])
        .arg(&json)
        .status()
        .unwrap();
    assert!(status.success());
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(value["config"]["tolerance_scale"], 10.0);
    let tol = value["checks"][0]["tolerance"].as_f64().unwrap();
    assert!((tol - 1e-7).abs() < 1e-20, "tolerance {tol}");
}

#[test]
fn circle_all_battery_with_perturbation() {
    let mut cfg = base_config("all", "circle");
    cfg.window = (-1.0, -0.5);
    cfg.modes = vec![0.2, 1.0, 0.1];
    cfg.beta0 = 0.1;
    cfg.samples = 257;
    let (report, _) = run(&cfg).unwrap();
    assert!(report.all_passed(), "failed checks: {:?}", report.checks);
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    assert!(names.contains(&"log-I-bound"));
    assert!(names.contains(&"U-prime-bound"));
    assert!(names.contains(&"log-tau-minus-U-bound"));
    assert!(names.contains(&"corollary-bound"));
    assert!(names.contains(&"hessian-identity"));
}

#[test]
fn sphere_all_battery_passes_and_notes_kappa() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("sphere.json");
    let mut cfg = base_config("all", "sphere");
    cfg.modes = vec![0.2, 1.0, -0.4];
    cfg.samples = 32;
    cfg.out_json = Some(json.display().to_string());
    let (report, _) = run(&cfg).unwrap();
    assert!(report.all_passed(), "failed checks: {:?}", report.checks);
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    // the sphere has kappa > 1, so the sign-convention note must be present
    let notes = value["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("kappa")));
}
