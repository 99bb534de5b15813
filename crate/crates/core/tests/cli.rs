//! Black-box tests of the `triclock` binary.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn triclock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triclock"))
        .args(args)
        .env_remove("TRICLOCK_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn step_prints_full_precision_csv() {
    let o = triclock(&[
        "step",
        "--x",
        "1.5707963267948966",
        "--y",
        "3.141592653589793",
        "--eps",
        "0.01",
        "-n",
        "2",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "x,y");
    assert_eq!(rows.len(), 3);
    let first: Vec<f64> = rows[1].split(',').map(|v| v.parse().unwrap()).collect();
    // φ(π/2, π) = 2 + 0 − 1 = 1, γ = 1 + 0 + 1 = 2
    assert!((first[0] - (PI / 2.0 + 0.01)).abs() < 1e-15);
    assert!((first[1] - (PI + 0.02)).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    assert_eq!(triclock(&[]).status.code(), Some(2));
    assert_eq!(triclock(&["--help"]).status.code(), Some(0));
    assert_eq!(triclock(&["frobnicate"]).status.code(), Some(2));
    let o = triclock(&["fixed-points", "--eps", "0.2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1/9"));
    assert_eq!(
        triclock(&["step", "--x", "1", "--y", "2", "-n", "1"])
            .status
            .code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("out.csv");
    let o = triclock(&[
        "step",
        "--x",
        "1",
        "--y",
        "2",
        "--eps",
        "0.05",
        "-n",
        "1",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn out_dir_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "eps = 0.05\nseed_grid = 20\nformat = \"json\"\noutput = \"fp.json\"\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_triclock"))
        .args(["fixed-points", "--config", cfg.to_str().unwrap()])
        .env("TRICLOCK_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&dir.path().join("fp.json"));
    assert_eq!(v["epsilon"], 0.05);
    assert_eq!(v["fixed_points"].as_array().unwrap().len(), 11);

    // flags win over the file
    let o = Command::new(env!("CARGO_BIN_EXE_triclock"))
        .args([
            "fixed-points",
            "--config",
            cfg.to_str().unwrap(),
            "--eps",
            "0.1",
        ])
        .env("TRICLOCK_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(read_json(&dir.path().join("fp.json"))["epsilon"], 0.1);

    fs::write(&cfg, "[nested]\neps = 0.05\n").unwrap();
    let o = triclock(&["fixed-points", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fixed_points_json_fields() {
    let o = triclock(&["fixed-points", "--eps", "0.05", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let fps = v["fixed_points"].as_array().unwrap();
    assert_eq!(fps.len(), 11);
    for fp in fps {
        assert!(fp["location"].is_object());
        assert_eq!(fp["eigenvalues"].as_array().unwrap().len(), 2);
        assert!(fp["class"].is_string());
    }
    assert_eq!(v["counts"]["attractors"], 2);
    assert_eq!(v["counts"]["repellers"], 4);
    assert_eq!(v["counts"]["saddles"], 5);
}

#[test]
fn basins_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let o = triclock(&[
        "basins",
        "--eps",
        "0.05",
        "--resolution",
        "200",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("upper "));
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r.split(',').count() == 200));
    // label codes: 0 upper, 1 lower, 2 boundary; row 0 is y near 0
    assert_eq!(rows[0].split(',').nth(150), Some("1"));
    assert_eq!(rows[150].split(',').next(), Some("0"));
    assert_eq!(rows[150].split(',').nth(150), Some("2"));

    let o = triclock(&[
        "basins",
        "--eps",
        "0.05",
        "--resolution",
        "40",
        "--format",
        "svg",
    ]);
    assert!(o.status.success());
    let svg = stdout(&o);
    assert!(
        svg.starts_with("<?xml") && svg.contains("<svg ") && svg.trim_end().ends_with("</svg>")
    );
}

#[test]
fn basins_binary_layout() {
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("b.bin");
    let o = triclock(&[
        "basins",
        "--eps",
        "0.05",
        "--resolution",
        "16",
        "--format",
        "bin",
        "--output",
        bin.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let bytes = fs::read(&bin).unwrap();
    assert_eq!(bytes.len(), 24 + 256 + 4 * 256);
    assert_eq!(u64::from_le_bytes(bytes[..8].try_into().unwrap()), 16);
    assert_eq!(f64::from_le_bytes(bytes[8..16].try_into().unwrap()), 0.05);
}

#[test]
fn simulate_diagonal_and_too_few_clocks() {
    let o = triclock(&[
        "simulate", "--eps", "0.05", "--phases", "0,2,2", "--tol", "1e-9", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let d = v["runs"][0]["report"]["state_differences"]
        .as_array()
        .unwrap();
    assert!((d[0].as_f64().unwrap() - PI).abs() < 1e-7);
    assert_eq!(d[0], d[1]);

    assert_eq!(
        triclock(&["simulate", "--eps", "0.05", "--clocks", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn simulate_splay_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    let o = triclock(&[
        "simulate",
        "--eps",
        "0.05",
        "--phases",
        "0,2,4",
        "--format",
        "json",
        "--trace",
        trace.to_str().unwrap(),
        "--trace-cycles",
        "3",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["runs"][0]["report"];
    assert_eq!(r["locked"], true);
    assert!(r["splay_error"].as_f64().unwrap() < 1e-6);
    let kp = r["kick_phases"].as_array().unwrap();
    assert!((kp[0].as_f64().unwrap() - 2.0 * PI / 3.0).abs() < 1e-6);
    assert!((kp[1].as_f64().unwrap() - 4.0 * PI / 3.0).abs() < 1e-6);
    assert!(fs::read_to_string(&trace).unwrap().lines().count() > 3);
}

#[test]
fn andronov_fixed_start_is_constant() {
    // v_f = h²/(8μ) + 2μ = 1/0.8 + 0.2
    let o = triclock(&[
        "andronov", "--mu", "0.1", "--h", "1", "--v0", "1.45", "--steps", "10", "--format", "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let vs: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(vs.len(), 11);
    assert!(vs.iter().all(|v| (v - 1.45).abs() < 1e-14));
}

#[test]
fn verify_passes() {
    for eps in ["0.05", "0.1"] {
        let o = triclock(&["verify", "--eps", eps, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["sa"], 6);
        assert_eq!(v["rs"], 10);
    }
}

#[test]
fn portrait_is_deterministic() {
    let a = triclock(&["portrait", "--eps", "0.05", "--orbits", "4"]);
    let b = triclock(&["portrait", "--eps", "0.05", "--orbits", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let svg = stdout(&a);
    assert!(svg.contains("#d62728"));
    assert_eq!(
        triclock(&["portrait", "--eps", "0.05", "--layers", "nonsense"])
            .status
            .code(),
        Some(2)
    );
}
