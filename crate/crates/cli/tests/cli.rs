//! End-to-end runs of the binary: exit codes, artifacts, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_double-phase")
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

const REFERENCE: &str = "\
[grid]
nodes = 17, 17

[exponents]
p = 1.8
q = 2.2
direction = 1, 0

[weight]
mu = x1

[nonlinearity]
family = pure_power
r = 4

[solver]
seed = 0
tolerance = 1e-6

[geometry]
samples = 50

[output]
fields = csv+vtk
";

const LOG_FAMILY: &str = "\
[grid]
nodes = 17, 17

[exponents]
p = 1.5
q = 2.2

[weight]
mu = 1

[nonlinearity]
family = log_power
r1 = 4
r2 = 4
a = 3
";

#[test]
fn solve_produces_three_converged_reports_and_fields() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.ini", REFERENCE);
    let out = tmp.path().join("artifacts");
    let result = run(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(
        result.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert_eq!(report.matches("converged=true").count(), 3);
    assert!(report.contains("[solution u0]"));
    assert!(report.contains("[solution w0]"));
    assert!(report.contains("hypothesis=h1 verdict=pass"));
    assert!(report.contains("nodal_positive=1"));
    for name in ["u0", "v0", "w0"] {
        let csv = fs::read_to_string(out.join(format!("{name}.csv"))).unwrap();
        assert!(csv.starts_with("x1,x2,value\n"));
        assert_eq!(csv.lines().count(), 17 * 17 + 1);
        let vtk = fs::read_to_string(out.join(format!("{name}.vtk"))).unwrap();
        assert!(vtk.contains("STRUCTURED_POINTS"));
    }
    // the exact configuration is echoed for replay
    assert_eq!(fs::read_to_string(out.join("config.ini")).unwrap(), REFERENCE);
}

#[test]
fn identical_runs_produce_identical_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.ini", REFERENCE);
    let out_a = tmp.path().join("a");
    let out_b = tmp.path().join("b");
    assert!(run(&["solve", "--config", &cfg, "--out", out_a.to_str().unwrap()])
        .status
        .success());
    assert!(run(&["solve", "--config", &cfg, "--out", out_b.to_str().unwrap()])
        .status
        .success());
    let a = fs::read(out_a.join("report.txt")).unwrap();
    let b = fs::read(out_b.join("report.txt")).unwrap();
    assert_eq!(a, b, "reports must be bit-identical for equal config+seed");
    let fa = fs::read(out_a.join("w0.csv")).unwrap();
    let fb = fs::read(out_b.join("w0.csv")).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn check_passes_on_the_log_family_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "check.ini", LOG_FAMILY);
    let out = tmp.path().join("check-out");
    let result = run(&["check", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(
        result.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    for key in ["f1", "f2", "f3", "f4", "f5", "f6", "f7"] {
        assert!(
            report.contains(&format!("hypothesis={key} verdict=pass")),
            "missing pass for {key}: {report}"
        );
    }
    assert!(report.contains("alpha2=1.0000000000000000e0"));
}

#[test]
fn malformed_config_exits_with_code_2_and_line_number() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = format!("{REFERENCE}\n[solver]\nnot_a_key = 1\n");
    let cfg = write_config(tmp.path(), "bad.ini", &bad);
    let out = tmp.path().join("bad-out");
    let result = run(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("line"), "stderr: {stderr}");
    assert!(stderr.contains("not_a_key"));
}

#[test]
fn fibering_rejects_a_zero_guess() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_text = format!("{REFERENCE}\n[solver]\nguess = 0\n");
    let cfg = write_config(tmp.path(), "zero.ini", &cfg_text);
    let out = tmp.path().join("fib-out");
    let result = run(&["fibering", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("zero field"), "stderr: {stderr}");
}

#[test]
fn fibering_writes_the_profile_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "fib.ini", REFERENCE);
    let out = tmp.path().join("fib-out");
    let result = run(&["fibering", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(result.status.success());
    let csv = fs::read_to_string(out.join("fibering.csv")).unwrap();
    assert!(csv.starts_with("t,k,kprime\n"));
    assert_eq!(csv.lines().count(), 51);
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("ray_scaling="));
}

#[test]
fn hypothesis_hard_fail_refuses_without_force() {
    // p = q = 2 violates both the exponent range and the ordering
    let semilinear = REFERENCE.replace("p = 1.8", "p = 2.0").replace("q = 2.2", "q = 2.0");
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "semi.ini", &semilinear);
    let out = tmp.path().join("semi-out");
    let refused = run(&["solve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(refused.status.code(), Some(3));

    let forced = run(&[
        "solve",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--force",
    ]);
    assert!(
        forced.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&forced.stderr)
    );
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert_eq!(report.matches("converged=true").count(), 3);
}

#[test]
fn geometry_reports_positive_sphere_minimum() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "geo.ini", REFERENCE);
    let out = tmp.path().join("geo-out");
    let result = run(&["geometry", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(result.status.success());
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("sphere delta=1.0000000000000001e-1"));
    assert!(report.contains("ray_decreasing_doublings="));
    assert!(out.join("ray.csv").exists());
}

#[test]
fn sweep_creates_one_directory_per_point() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_text = format!(
        "{REFERENCE}\n[sweep]\nparameter = nonlinearity.r\nvalues = 3.5, 4.0, 4.5\n"
    );
    let cfg = write_config(tmp.path(), "sweep.ini", &cfg_text);
    let out = tmp.path().join("sweep-out");
    let result = run(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert!(
        result.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    for idx in 0..3 {
        let dir = out.join(format!("point_{idx:03}"));
        assert!(dir.join("report.txt").exists());
        let echo = fs::read_to_string(dir.join("config.ini")).unwrap();
        let value = [3.5, 4.0, 4.5][idx];
        assert!(echo.contains(&format!("r = {value}")), "echo: {echo}");
    }
    let summary = fs::read_to_string(out.join("report.txt")).unwrap();
    assert_eq!(summary.matches("status=ok").count(), 3);
}
