use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_acoustic-lattice"))
}

fn run(dir: &Path, sub: &str, config: &str, extra: &[&str]) -> Output {
    let path = dir.join(format!("{sub}.json"));
    fs::write(&path, config).unwrap();
    bin()
        .arg(sub)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir)
        .args(extra)
        .output()
        .unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const EM2: &str = r#"{
    "dimension": 2,
    "wave": {"k_rows": [[1, 0], [0, 1]]},
    "coefficients": {"direct": {"a": 1, "b": 1}},
    "amplitudes": {"explicit": [{"re": 1}, {"re": 1}, {"re": -1}, {"re": -1}]}
}"#;

const LOM: &str = r#"{
    "dimension": 2,
    "wave": {"k_rows": [[1, 0], [0, 1]]},
    "coefficients": {"direct": {"a": 1, "b": 0}},
    "amplitudes": {"explicit": [{"re": -1}, {"re": 1}, {"re": -1}, {"re": 1}]}
}"#;

#[test]
fn coeffs_physical_and_matched() {
    let dir = TempDir::new().unwrap();
    let out = run(
        dir.path(),
        "coeffs",
        r#"{"dimension": 2, "wave": {"k_rows": [[1,0],[0,1]]},
            "coefficients": {"physical": {
              "medium": {"compressibility": 4.5e-10, "density": 1000},
              "particle": {"compressibility": 2.4e-10, "density": 1050},
              "frequency": 1e6}}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let f2 = v["f2"].as_f64().unwrap();
    assert!(f2 > -2.0 && f2 < 1.0);
    assert!(v["a"].as_f64().unwrap() > 0.0);

    let out = run(
        dir.path(),
        "coeffs",
        r#"{"dimension": 2, "wave": {"k_rows": [[1,0],[0,1]]},
            "coefficients": {"physical": {
              "medium": {"compressibility": 4.5e-10, "density": 1000},
              "particle": {"compressibility": 4.5e-10, "density": 1000},
              "frequency": 1e6}}}"#,
        &[],
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["a"], 0.0);
    assert_eq!(v["b"], 0.0);

    let out = run(
        dir.path(),
        "coeffs",
        r#"{"dimension": 2, "wave": {"k_rows": [[1,0],[0,1]]},
            "coefficients": {"physical": {
              "medium": {"compressibility": -1, "density": 1000},
              "particle": {"compressibility": 1, "density": 1000},
              "frequency": 1e6}}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("compressibility"));
}

#[test]
fn design_outputs_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = run(
        dir.path(),
        "design",
        r#"{"dimension": 3, "wave": {"bravais": {"class": "cubic-primitive"}}, "wavenumber": 1,
            "coefficients": {"direct": {"a": 1, "b": 0}}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let wave = read_json(&dir.path().join("wave.json"));
    assert_eq!(wave["k_rows"], serde_json::json!([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]));

    // wave.json verbatim as the wave source
    let verbatim = format!(
        r#"{{"dimension": 3, "wave": {wave}, "coefficients": {{"direct": {{"a": 1, "b": 1}}}}}}"#
    );
    let out = run(dir.path(), "predict", &verbatim, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let by_file = r#"{"dimension": 3, "wave": {"file": "wave.json"}, "coefficients": {"direct": {"a": 1, "b": 1}}}"#;
    let out = run(dir.path(), "predict", by_file, &[]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(
        dir.path(),
        "design",
        r#"{"dimension": 2, "wave": {"bravais": {"class": "monoclinic", "params": {"gamma": 1.2}}},
            "wavenumber": 1, "coefficients": {"direct": {"a": 1, "b": 1}}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Orthorhombic centred"));

    let out = run(
        dir.path(),
        "design",
        r#"{"dimension": 2, "wave": {"bravais": {"class": "pentagonal"}},
            "wavenumber": 1, "coefficients": {"direct": {"a": 1, "b": 1}}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cubic-face-centred") && err.contains("hexagonal"));
}

#[test]
fn predict_em2_and_lom() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), "predict", EM2, &[]);
    assert_eq!(out.status.code(), Some(0));
    let p = read_json(&dir.path().join("prediction.json"));
    assert_eq!(p["classification"]["branch"], "isolated_points");
    let preds = p["classification"]["predictions"].as_array().unwrap();
    assert_eq!(preds[0]["offsets"].as_array().unwrap().len(), 4);

    let out = run(dir.path(), "predict", LOM, &[]);
    assert_eq!(out.status.code(), Some(0));
    let p = read_json(&dir.path().join("prediction.json"));
    let kinds: Vec<&str> = p["classification"]["predictions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"line_family_set"));
}

#[test]
fn sample_summary_and_zero_field() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), "sample", EM2, &["--resolution", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let s = read_json(&dir.path().join("summary.json"));
    assert!((s["min"].as_f64().unwrap() + 2.0).abs() < 1e-6);
    assert_eq!(s["bound_ok"], true);
    let csv = fs::read_to_string(dir.path().join("field.csv")).unwrap();
    assert!(csv.starts_with("alpha_1,alpha_2,x_1,x_2,psi\n"));
    assert_eq!(csv.lines().count(), 64 * 64 + 1);

    let zero = EM2.replace(
        r#"[{"re": 1}, {"re": 1}, {"re": -1}, {"re": -1}]"#,
        r#"[{"re": 0}, {"re": 0}, {"re": 0}, {"re": 0}]"#,
    );
    let out = run(dir.path(), "sample", &zero, &["--resolution", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let s = read_json(&dir.path().join("summary.json"));
    assert_eq!(s["min"], 0.0);
    assert_eq!(s["max"], 0.0);

    let out = run(dir.path(), "sample", EM2, &["--resolution", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), "verify", EM2, &["--resolution", "64"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = read_json(&dir.path().join("report.json"));
    assert_eq!(r["confirmed"], true);

    // not an eigenvector: nothing is predicted, so nothing is confirmed
    let mixed = EM2.replace(
        r#"[{"re": 1}, {"re": 1}, {"re": -1}, {"re": -1}]"#,
        r#"[{"re": 1}, {"re": 0.3}, {"re": 0.2}, {"re": -1}]"#,
    );
    let out = run(dir.path(), "verify", &mixed, &["--resolution", "16"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn relax_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = EM2.replace(
        "\"amplitudes\"",
        "\"relax\": {\"particles\": 20, \"trajectory\": true}, \"amplitudes\"",
    );
    let out = run(dir.path(), "relax", &cfg, &["--seed", "9"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let first = fs::read(dir.path().join("particles.csv")).unwrap();
    let traj = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(traj.starts_with("iteration,particle,alpha_1,alpha_2,psi\n"));
    run(dir.path(), "relax", &cfg, &["--seed", "9"]);
    assert_eq!(first, fs::read(dir.path().join("particles.csv")).unwrap());

    let text = String::from_utf8(first).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().filter(|r| r.ends_with(",true")).count() >= 19);
}

#[test]
fn missing_config_is_invalid_input() {
    let out = bin().arg("predict").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().arg("bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
