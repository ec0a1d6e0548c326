use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cvhnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvhnn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn gen_weights_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let out = cvhnn(&["gen-weights", "--n", "10", "--seed", "42", "--out", path(&model)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = cvhnn(&["validate", "--model", path(&model)]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["is_hermitian"], true);
    assert_eq!(report["diagonal_real_nonneg"], true);
}

#[test]
fn gen_weights_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert!(cvhnn(&[
            "gen-weights",
            "--n",
            "6",
            "--seed",
            "9",
            "--kind",
            "cosign",
            "--out",
            path(p)
        ])
        .status
        .success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let model: Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(model["activation"]["kind"], "cosign");
    assert_eq!(model["n"], 6);
}

#[test]
fn bad_flags_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    assert_eq!(
        cvhnn(&["gen-weights", "--n", "0", "--out", path(&model)]).status.code(),
        Some(2)
    );
    assert_eq!(
        cvhnn(&["gen-weights", "--n", "3", "--q", "0", "--out", path(&model)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cvhnn(&["gen-weights", "--n", "3", "--r=-1", "--out", path(&model)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cvhnn(&["experiment", "--sweeps", "0", "--out-dir", path(dir.path())])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cvhnn(&[
            "experiment",
            "--rect-min",
            "5",
            "--rect-max",
            "-5",
            "--out-dir",
            path(dir.path())
        ])
        .status
        .code(),
        Some(2)
    );
    assert!(!model.exists());
}

#[test]
fn run_default_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let trace = dir.path().join("trace.csv");
    assert!(
        cvhnn(&["gen-weights", "--n", "8", "--seed", "3", "--out", path(&model)])
            .status
            .success()
    );
    let out = cvhnn(&[
        "run",
        "--model",
        path(&model),
        "--sweeps",
        "200",
        "--trace",
        path(&trace),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"]["kind"], "converged");
    assert_eq!(v["initial_state"].as_array().unwrap().len(), 8);

    let csv = fs::read_to_string(&trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("trial,update_index,neuron,energy"));
    assert_eq!(lines.count(), v["updates"].as_u64().unwrap() as usize);
}

#[test]
fn run_parallel_two_cycle_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let init = dir.path().join("init.json");
    fs::write(
        &model,
        r#"{"n": 2, "activation": {"kind": "split-sign", "K": 1, "Q": 1, "R": 1.0},
            "weights": [[[0, 0], [-1, 0]], [[-1, 0], [0, 0]]],
            "thresholds": [[0, 0], [0, 0]]}"#,
    )
    .unwrap();
    fs::write(&init, "[[1, 1], [1, 1]]").unwrap();

    let out = cvhnn(&[
        "run",
        "--model",
        path(&model),
        "--init",
        path(&init),
        "--mode",
        "parallel",
        "--sweeps",
        "10",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"]["kind"], "cycle");
    assert_eq!(v["verdict"]["length"], 2);

    let out = cvhnn(&["run", "--model", path(&model), "--init", path(&init), "--sweeps", "10"]);
    assert_eq!(stdout_json(&out)["verdict"]["kind"], "converged");
}

#[test]
fn run_rejects_off_image_initial_state() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let init = dir.path().join("init.json");
    assert!(
        cvhnn(&["gen-weights", "--n", "2", "--kind", "split-sign", "--out", path(&model)])
            .status
            .success()
    );
    fs::write(&init, "[[0.5, 1], [1, 1]]").unwrap();
    assert_eq!(
        cvhnn(&["run", "--model", path(&model), "--init", path(&init)])
            .status
            .code(),
        Some(1)
    );
    fs::write(&init, "[[1, 1]]").unwrap();
    assert_eq!(
        cvhnn(&["run", "--model", path(&model), "--init", path(&init)])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        cvhnn(&[
            "run",
            "--model",
            path(&model),
            "--init",
            path(&init),
            "--init-seed",
            "4"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(cvhnn(&["run", "--model", path(&missing)]).status.code(), Some(1));
    let broken = dir.path().join("broken.json");
    fs::write(
        &broken,
        r#"{"n": 2, "activation": {"kind": "csign", "K": 4}, "weights": [[[0,"#,
    )
    .unwrap();
    assert_eq!(cvhnn(&["validate", "--model", path(&broken)]).status.code(), Some(1));
}

#[test]
fn validate_flags_asymmetric_weights() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    fs::write(
        &model,
        r#"{"n": 2, "activation": {"kind": "csign", "K": 4, "Q": 1, "R": 1.0},
            "weights": [[[0, 0], [1, 0.5]], [[1, 0.5], [0, 0]]],
            "thresholds": [[0, 0], [0, 0]]}"#,
    )
    .unwrap();
    let out = cvhnn(&["validate", "--model", path(&model)]);
    assert_eq!(out.status.code(), Some(3));
    let report = stdout_json(&out);
    assert_eq!(report["is_hermitian"], false);
    assert_eq!(report["max_violation"], 1.0);
}

#[test]
fn experiment_writes_artifacts() {
    for kind in ["coceil", "cosign"] {
        let dir = tempfile::tempdir().unwrap();
        let out = cvhnn(&["experiment", "--kind", kind, "--out-dir", path(dir.path())]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let report: Value = serde_json::from_slice(&fs::read(dir.path().join("report.json")).unwrap()).unwrap();
        assert_eq!(report["config"]["activation"]["kind"], kind);
        assert_eq!(report["trials"].as_array().unwrap().len(), 5);
        let csv = fs::read_to_string(dir.path().join("energy_trace.csv")).unwrap();
        assert!(csv.starts_with("trial,update_index,neuron,energy\n"));
        let svg = fs::read_to_string(dir.path().join("energy.svg")).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 5);
    }
}
