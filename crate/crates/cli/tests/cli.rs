//! End-to-end checks of the `gorge` binary: exit codes, CSV output,
//! determinism, config files, and the machine-readable error line.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_gorge")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gorge-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn gorge(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = gorge(args);
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn h2_run_writes_expected_csv() {
    let dir = tmp_dir("h2");
    let out_path = dir.join("h2-ngd.csv");
    let stdout = run_ok(&[
        "run",
        "--problem",
        "h2",
        "--optimizer",
        "ngd",
        "--lr",
        "0.05",
        "--iters",
        "100",
        "--threshold",
        "-0.25",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(stdout.contains("status: completed"));
    assert!(stdout.contains("reach(-0.25)="));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("iter,energy,grad_norm,step_norm,evals,ms")
    );
    assert_eq!(text.lines().count(), 102); // header + rows 0..=100
    let first = lines.next().unwrap();
    assert!(first.starts_with("0,"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tmp_dir("det");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for path in [&a, &b] {
        run_ok(&[
            "run",
            "--problem",
            "narrow-gorge",
            "--qubits",
            "4",
            "--optimizer",
            "ngdm",
            "--m",
            "3",
            "--iters",
            "50",
            "--out",
            path.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn hamiltonian_file_pipeline() {
    let dir = tmp_dir("file");
    let ham = dir.join("h2.txt");
    std::fs::write(&ham, "# toy molecule\n0.4 ZI\n0.4 IZ\n0.2 XX\n").unwrap();
    let out_path = dir.join("file-gd.csv");
    let stdout = run_ok(&[
        "run",
        "--problem",
        "file",
        "--hamiltonian",
        ham.to_str().unwrap(),
        "--qubits",
        "2",
        "--depth",
        "1",
        "--entanglement",
        "linear",
        "--init",
        "0.6871,1.5708,0,0",
        "--optimizer",
        "adam",
        "--iters",
        "40",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(stdout.contains("status: completed"));
    assert!(out_path.exists());
}

#[test]
fn config_file_with_cli_override() {
    let dir = tmp_dir("cfg");
    let out_path = dir.join("from-config.csv");
    let cfg = dir.join("exp.cfg");
    std::fs::write(
        &cfg,
        format!(
            "[problem]\nname = narrow-gorge\nqubits = 2\n\n[optimizer]\nname = gd\nlr = 0.05\n\n[run]\niters = 80\nout = {}\nthresholds = 0.5\n",
            out_path.display()
        ),
    )
    .unwrap();
    // Override the optimizer from the command line; keep everything else.
    let stdout = run_ok(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--optimizer",
        "ngd",
    ]);
    assert!(stdout.contains("narrow-gorge-2/ngd"));
    assert!(stdout.contains("reach(0.5)="));
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap().lines().count(),
        82
    );
}

#[test]
fn vanishing_gradient_is_reported_not_fatal() {
    let dir = tmp_dir("vanish");
    let out_path = dir.join("vanish.csv");
    let stdout = run_ok(&[
        "run",
        "--problem",
        "narrow-gorge",
        "--qubits",
        "3",
        "--optimizer",
        "ngd",
        "--init",
        "zeros",
        "--iters",
        "10",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(stdout.contains("status: gradient vanished at iteration 0"));
}

#[test]
fn errors_use_machine_readable_line_and_nonzero_exit() {
    let out = gorge(&[
        "run",
        "--problem",
        "unknown-problem",
        "--optimizer",
        "gd",
        "--out",
        "/tmp/never-written.csv",
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr
            .lines()
            .any(|l| l.starts_with("error: invalid_config: ")),
        "stderr was: {stderr}"
    );

    let out = gorge(&["run", "--problem", "h2", "--optimizer", "gd"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("error: invalid_config:") && stderr.contains("no output path"));

    // Malformed Hamiltonian file: parse error with a line number.
    let dir = tmp_dir("badham");
    let ham = dir.join("bad.txt");
    std::fs::write(&ham, "0.5 XZ\n0.5 X\n").unwrap();
    let out = gorge(&[
        "run",
        "--problem",
        "file",
        "--hamiltonian",
        ham.to_str().unwrap(),
        "--qubits",
        "2",
        "--optimizer",
        "gd",
        "--out",
        dir.join("x.csv").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("error: parse: "), "stderr was: {stderr}");
}

#[test]
fn quadratic_problem_runs() {
    let dir = tmp_dir("quad");
    let out_path = dir.join("quad.csv");
    let stdout = run_ok(&[
        "run",
        "--problem",
        "quadratic",
        "--x-star",
        "0,0",
        "--init",
        "3,4",
        "--optimizer",
        "ngd",
        "--iters",
        "120",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(stdout.contains("quadratic-2/ngd"));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let last = text.lines().last().unwrap();
    let energy: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!(energy < 1e-2, "final energy {energy}");
}

#[test]
fn written_csv_is_parseable_by_the_library() {
    let dir = tmp_dir("roundtrip");
    let out_path = dir.join("t.csv");
    run_ok(&[
        "run",
        "--problem",
        "h2",
        "--optimizer",
        "gd",
        "--iters",
        "25",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let trace: gorge_core::EnergyTrace64 =
        gorge_core::runner::read_csv(Path::new(&out_path)).unwrap();
    assert_eq!(trace.len(), 26);
    assert!((trace.rows()[0].energy - 0.436082838177824).abs() < 1e-12);
}
