//! End-to-end runs of the CLI binary: gen-ops → simulate → recover →
//! metrics, plus error-path exit codes and determinism.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_catlift"))
}

fn run_ok(args: &[&str]) {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command {:?} failed:\n{}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read_report(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn round_trip_reproduces_ideal_state() {
    for n in ["2", "3", "6"] {
        let dir = tempfile::tempdir().unwrap();
        let ops = dir.path().join("ops.jsonl");
        let meas = dir.path().join("meas.csv");
        let rho = dir.path().join("rho.json");
        let report = dir.path().join("report.json");

        run_ok(&["gen-ops", "--qubits", n, "--set", "full", "--out", ops.to_str().unwrap()]);
        run_ok(&["simulate", "--ops", ops.to_str().unwrap(), "--out", meas.to_str().unwrap()]);
        run_ok(&[
            "recover",
            "--ops",
            ops.to_str().unwrap(),
            "--meas",
            meas.to_str().unwrap(),
            "--out",
            rho.to_str().unwrap(),
        ]);
        run_ok(&[
            "metrics",
            "--rho",
            rho.to_str().unwrap(),
            "--out",
            report.to_str().unwrap(),
        ]);

        let report = read_report(&report);
        let f = report["fidelity"].as_f64().unwrap();
        assert!((f - 1.0).abs() <= 1e-4, "n={n}: fidelity {f}");
        let err = report["frobenius_error"].as_f64().unwrap();
        assert!(err <= 1e-3, "n={n}: error {err}");
    }
}

#[test]
fn l1_method_and_plot_series() {
    let dir = tempfile::tempdir().unwrap();
    let ops = dir.path().join("ops.jsonl");
    let meas = dir.path().join("meas.csv");
    let rho = dir.path().join("rho.json");
    let report = dir.path().join("report.json");
    let plot = dir.path().join("visibility.csv");

    run_ok(&["gen-ops", "--qubits", "2", "--set", "fid14", "--out", ops.to_str().unwrap()]);
    run_ok(&["simulate", "--ops", ops.to_str().unwrap(), "--out", meas.to_str().unwrap()]);
    run_ok(&[
        "recover",
        "--ops",
        ops.to_str().unwrap(),
        "--meas",
        meas.to_str().unwrap(),
        "--method",
        "l1",
        "--out",
        rho.to_str().unwrap(),
    ]);
    run_ok(&[
        "metrics",
        "--rho",
        rho.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
        "--plot",
        plot.to_str().unwrap(),
    ]);
    let f = read_report(&report)["fidelity"].as_f64().unwrap();
    assert!((f - 1.0).abs() <= 1e-3, "fidelity {f}");
    let plot = std::fs::read_to_string(&plot).unwrap();
    assert!(plot.starts_with("theta,value\n"));
    assert_eq!(plot.lines().count(), 49);
}

#[test]
fn sweep_command_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let ops = dir.path().join("ops.jsonl");
    let meas = dir.path().join("meas.csv");
    let report = dir.path().join("sweep.json");
    let plot = dir.path().join("sweep.csv");

    run_ok(&["gen-ops", "--qubits", "2", "--set", "full", "--out", ops.to_str().unwrap()]);
    run_ok(&["simulate", "--ops", ops.to_str().unwrap(), "--out", meas.to_str().unwrap()]);
    run_ok(&[
        "sweep",
        "--ops",
        ops.to_str().unwrap(),
        "--meas",
        meas.to_str().unwrap(),
        "--sizes",
        "30,80",
        "--reps",
        "2",
        "--max-iter",
        "2000",
        "--out",
        report.to_str().unwrap(),
        "--plot",
        plot.to_str().unwrap(),
    ]);
    let report = read_report(&report);
    assert_eq!(report["summaries"].as_array().unwrap().len(), 2);
    let plot = std::fs::read_to_string(&plot).unwrap();
    assert!(plot.starts_with("size,mean_fidelity,"));
    assert_eq!(plot.lines().count(), 3);
}

#[test]
fn corrupted_measurement_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let ops = dir.path().join("ops.jsonl");
    let meas = dir.path().join("meas.csv");
    run_ok(&["gen-ops", "--qubits", "2", "--set", "fid3", "--out", ops.to_str().unwrap()]);
    std::fs::write(&meas, "operator_id,value,setting_id,shots\n0,bad,,\n").unwrap();
    let out = bin()
        .args([
            "recover",
            "--ops",
            ops.to_str().unwrap(),
            "--meas",
            meas.to_str().unwrap(),
            "--out",
            dir.path().join("rho.json").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains(":2:"), "missing line number: {msg}");
}

#[test]
fn usage_error_exits_1() {
    let out = bin().args(["recover", "--nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // Bad flag values that parse but are invalid are usage errors too.
    let dir = tempfile::tempdir().unwrap();
    let ops = dir.path().join("ops.jsonl");
    run_ok(&["gen-ops", "--qubits", "2", "--set", "fid3", "--out", ops.to_str().unwrap()]);
    let out = bin()
        .args([
            "simulate",
            "--ops",
            ops.to_str().unwrap(),
            "--noise",
            "white:2.0",
            "--out",
            dir.path().join("m.csv").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn simulation_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let ops = dir.path().join("ops.jsonl");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    run_ok(&["gen-ops", "--qubits", "3", "--set", "full", "--out", ops.to_str().unwrap()]);
    for out in [&a, &b] {
        run_ok(&[
            "simulate",
            "--ops",
            ops.to_str().unwrap(),
            "--noise",
            "gaussian:0.01",
            "--shots",
            "100000",
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
