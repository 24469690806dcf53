use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qsync(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsync")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SWEEP: &str = r#"{
    "schema_version": "1",
    "model": {"type": "driven_spin1", "params": {"gamma_g": 1, "gamma_d": 10}},
    "sweep": {"axis1": {"param": "detuning", "min": -1, "max": 1, "count": 3},
              "axis2": {"param": "drive", "min": 0, "max": 0.4, "count": 2}},
    "measures": [{"id": "omega_r"}, {"id": "omega_d"}, {"id": "s_phase"},
                 {"id": "omega_r_certificate", "samples": 200}],
    "runtime": {"workers": 2}
}"#;

#[test]
fn sweep_writes_csv_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "sweep.json", SWEEP);
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("grid{workers}.csv"));
        let run = qsync(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--workers", workers, "--seed", "9"]);
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
        outputs.push(fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "axis1,axis2,omega_r,omega_d,s_phase,omega_r_certificate,residual,truncation_delta"
    );
    assert_eq!(lines.count(), 6);
}

#[test]
fn sweep_json_to_stdout() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "sweep.json", SWEEP);
    let run = qsync(&["sweep", "--config", &cfg, "--format", "json"]);
    assert!(run.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(doc["cells"].as_array().unwrap().len(), 6);
    assert_eq!(doc["axis1"]["param"], "detuning");
}

#[test]
fn config_errors_exit_2_and_list_every_problem() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"model": {"type": "driven_vdp", "params": {"gamma_d": -1}}, "runtime": {"workers": 0}, "extra": 1}"#,
    );
    for sub in ["validate-config", "sweep", "measure"] {
        let run = qsync(&[sub, "--config", &cfg]);
        assert_eq!(run.status.code(), Some(2), "{sub}");
        let err = String::from_utf8_lossy(&run.stderr);
        for path in ["model.params.gamma_d", "runtime.workers", "extra"] {
            assert!(err.contains(path), "{sub}: {err}");
        }
    }
    let missing = qsync(&["validate-config", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn validate_config_accepts_good_configs() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "sweep.json", SWEEP);
    let run = qsync(&["validate-config", "--config", &cfg]);
    assert!(run.status.success());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}

#[test]
fn quality_gate_failure_exits_4() {
    let dir = TempDir::new().unwrap();
    // six Fock levels cannot hold this limit cycle
    let cfg = write(
        dir.path(),
        "coarse.json",
        r#"{"model": {"type": "driven_vdp", "params": {"gamma_d": 0.5, "cutoff": 6}},
            "sweep": {"axis1": {"param": "detuning", "min": 0, "max": 0.1, "count": 2},
                      "axis2": {"param": "drive", "min": 0, "max": 0.1, "count": 2}},
            "measures": [{"id": "mean_occupation"}]}"#,
    );
    let out = dir.path().join("g.csv");
    let run = qsync(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(4));
    assert!(out.exists());
    let skipped = qsync(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--no-convergence-check"]);
    assert!(skipped.status.success());
}

#[test]
fn measure_and_steady_state() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "point.json",
        r#"{"model": {"type": "coupled_driven_spin1"},
            "measures": [{"id": "omega_r", "class": "partially_coherent_product"}, {"id": "mutual_information"}]}"#,
    );
    let run = qsync(&["measure", "--config", &cfg]);
    assert!(run.status.success());
    let text = String::from_utf8(run.stdout).unwrap();
    let values: Vec<f64> = text.lines().skip(1).take(2).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(values[0] >= values[1] - 1e-9);

    let run = qsync(&["steady-state", "--config", &cfg, "--format", "json"]);
    assert!(run.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    let re = doc["re"].as_array().unwrap();
    assert_eq!(re.len(), 9);
    let trace: f64 = (0..9).map(|i| re[i][i].as_f64().unwrap()).sum();
    assert!((trace - 1.0).abs() < 1e-12);
}

#[test]
fn wigner_reports_reference_occupation() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "w.json",
        r#"{"model": {"type": "driven_vdp", "params": {"drive": 3, "cutoff": 30}},
            "wigner": {"x": {"min": -3, "max": 3, "count": 5}, "p": {"min": -3, "max": 3, "count": 5}}}"#,
    );
    let run = qsync(&["wigner", "--config", &cfg]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.starts_with("# site=0,reference_occupation="));
    assert_eq!(text.lines().count(), 2 + 25);
    let spin = write(dir.path(), "s.json", r#"{"model": {"type": "driven_spin1"},
        "wigner": {"x": {"min": -1, "max": 1, "count": 2}, "p": {"min": -1, "max": 1, "count": 2}}}"#);
    assert_eq!(qsync(&["wigner", "--config", &spin]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "sweep.json", SWEEP);
    let out = dir.path().join("missing").join("grid.csv");
    let run = qsync(&["measure", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
}
