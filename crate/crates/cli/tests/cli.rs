use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn heatkern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatkern"))
        .args(args)
        .env_remove("HEATKERN_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn success(args: &[&str]) -> String {
    let out = heatkern(args);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

/// Column `name` of a CSV document as floats.
fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

fn json(s: &str) -> Value {
    serde_json::from_str(s.trim()).expect("valid json")
}

#[test]
fn eval_sphere_decreases_along_theta() {
    let csv = success(&[
        "eval",
        "--model",
        "sphere2",
        "--t",
        "0.5",
        "--theta",
        "0:3.14:64",
    ]);
    assert!(csv.starts_with("model,theta,t,value,abs_err\n"));
    let values = column(&csv, "value");
    assert_eq!(values.len(), 64);
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn eval_euclidean_origin() {
    let csv = success(&[
        "eval", "--model", "euclid", "--dim", "2", "--d", "0", "--t", "1",
    ]);
    let v = column(&csv, "value");
    assert_eq!(v.len(), 1);
    assert!((v[0] - 1.0 / (4.0 * PI)).abs() < 1e-16);
}

#[test]
fn eval_torus_representations_agree() {
    let csv = success(&[
        "eval",
        "--model",
        "torus",
        "--aspect",
        "2",
        "--t",
        "0.05",
        "--xy",
        "0.1,0.1",
        "--both-reps",
    ]);
    let v = column(&csv, "value");
    assert_eq!(v.len(), 2);
    assert!((v[0] - v[1]).abs() < 1e-12);
    assert!(csv.contains("torus2-images") && csv.contains("torus2-fourier"));
}

#[test]
fn zero_time_is_dropped_from_grids() {
    let csv = success(&["eval", "--model", "hyp3", "--d", "1", "--t", "0:1:3"]);
    assert_eq!(column(&csv, "t"), vec![0.5, 1.0]);
}

#[test]
fn golden_files() {
    let euclid = success(&[
        "eval", "--model", "euclid", "--dim", "3", "--d", "0:1:3", "--t", "0.5",
    ]);
    assert_eq!(euclid, include_str!("golden/eval_euclid3.csv"));
    for (d, v) in column(&euclid, "d").iter().zip(column(&euclid, "value")) {
        let exact = (2.0 * PI).powf(-1.5) * (-d * d / 2.0).exp();
        assert!((v - exact).abs() < 1e-16);
    }
    let fejer = success(&["sum", "fejer", "--N", "3", "--x", "-1:1:5"]);
    assert_eq!(fejer, include_str!("golden/fejer3.csv"));
    assert_eq!(column(&fejer, "value"), vec![0.0, 0.8125, 0.5, 0.9375, 4.0]);
}

#[test]
fn csv_numbers_round_trip() {
    let csv = success(&["eval", "--model", "hyp3", "--d", "0.3", "--t", "0.7"]);
    let line = csv.lines().nth(1).unwrap();
    let field = line.split(',').nth(3).unwrap();
    let mantissa = field.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17);
    assert!(!csv.contains('\r'));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = [
        "eval",
        "--model",
        "hyp2",
        "--d",
        "0.1:3:24",
        "--t",
        "0.5,1",
        "--both-reps",
    ];
    let reference = success(&args);
    for n in ["0", "1", "3"] {
        let out = Command::new(env!("CARGO_BIN_EXE_heatkern"))
            .args(args)
            .env("HEATKERN_THREADS", n)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        assert_eq!(stdout(&out), reference, "HEATKERN_THREADS={n}");
    }
}

#[test]
fn json_format_has_sorted_keys() {
    let out = success(&[
        "mass", "--model", "sphere2", "--t", "0.5", "--format", "json",
    ]);
    assert!(out.starts_with("[{\"abs_err\":"));
    let v = json(&out);
    let m = v[0]["mass"].as_f64().unwrap();
    assert!((m - 1.0).abs() < 1e-6);
}

#[test]
fn mass_with_both_hyperbolic_representations() {
    let csv = success(&[
        "mass",
        "--model",
        "hyp2",
        "--t",
        "1",
        "--both-reps",
        "--tol",
        "1e-8",
    ]);
    for m in column(&csv, "mass") {
        assert!((m - 1.0).abs() < 1e-6);
    }
}

#[test]
fn scans() {
    let out = heatkern(&["scan", "--model", "sphere2", "--t", "0.1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).trim_end().ends_with("true"));

    let out = heatkern(&[
        "scan", "--model", "torus", "--aspect", "2", "--dir", "1,1", "--t", "0.05",
    ]);
    assert_eq!(code(&out), 0);

    let out = heatkern(&[
        "scan",
        "--model",
        "profile",
        "--profile",
        "sphere",
        "--dim",
        "3",
        "--init",
        "two-bump",
        "--t",
        "0",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).trim_end().ends_with("false"));

    let out = heatkern(&["scan", "--model", "torus", "--t", "0.05"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_sphere_writes_trajectory_and_summary() {
    let dir = TempDir::new().unwrap();
    let traj = dir.path().join("traj.csv");
    let summary = dir.path().join("summary.json");
    success(&[
        "solve",
        "--profile",
        "sphere",
        "--R",
        "1",
        "--dim",
        "3",
        "--eps",
        "0.05",
        "--t",
        "0.1",
        "--records",
        "5",
        "--trajectory",
        traj.to_str().unwrap(),
        "--out",
        summary.to_str().unwrap(),
    ]);
    let s = json(&fs::read_to_string(&summary).unwrap());
    assert_eq!(s["boundary_kind"], "closed");
    assert!(s["max_relative_defect"].as_f64().unwrap() <= 1e-8);
    assert!(s["mass_drift"].as_f64().unwrap() < 1e-6);
    let csv = fs::read_to_string(&traj).unwrap();
    assert!(csv.starts_with("t,rho,f\n"));
    let n = s["intervals"].as_u64().unwrap() as usize;
    assert_eq!(csv.lines().count(), 1 + 5 * (n + 1));
}

#[test]
fn solve_caps() {
    let s = json(&success(&[
        "solve",
        "--profile",
        "cap",
        "--angle",
        "2.094",
        "--bc",
        "dirichlet",
        "--t",
        "0.2",
    ]));
    assert_eq!(s["boundary_kind"], "dirichlet");
    assert_eq!(s["mass_strictly_decreasing"], true);
    assert!(s["max_relative_defect"].as_f64().unwrap() <= 1e-8);
    assert!(s["final_mass"].as_f64().unwrap() < 1.0);

    let s = json(&success(&[
        "solve",
        "--profile",
        "cap",
        "--bc",
        "neumann",
        "--t",
        "0.2",
    ]));
    assert_eq!(s["boundary_kind"], "neumann");
    assert!(s["mass_drift"].as_f64().unwrap() < 1e-6);
    assert!(s["max_relative_defect"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn solve_rejections() {
    let out = heatkern(&["solve", "--profile", "sphere", "--t", "0.1", "--dt", "1"]);
    assert_eq!(code(&out), 3);
    let out = heatkern(&[
        "solve",
        "--profile",
        "ellipsoid",
        "--bc",
        "dirichlet",
        "--t",
        "0.1",
    ]);
    assert_eq!(code(&out), 2);
    let out = heatkern(&["solve", "--profile", "csv", "--t", "0.1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_from_curve_csv() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("curve.csv");
    let mut text = String::from("s,r,z\n");
    for i in 0..=200 {
        let s = PI * i as f64 / 200.0;
        text.push_str(&format!("{s},{},{}\n", s.sin(), -s.cos()));
    }
    fs::write(&path, text).unwrap();
    let s = json(&success(&[
        "solve",
        "--profile",
        "csv",
        "--curve",
        path.to_str().unwrap(),
        "--t",
        "0.05",
    ]));
    assert_eq!(s["boundary_kind"], "closed");
    assert!(s["mass_drift"].as_f64().unwrap() < 1e-6);
}

#[test]
fn error_exit_codes() {
    assert_eq!(
        code(&heatkern(&[
            "eval", "--model", "sphere2", "--d", "1", "--t", "1e-6"
        ])),
        3
    );
    assert_eq!(
        code(&heatkern(&[
            "eval", "--model", "sphere2", "--d", "4", "--t", "1"
        ])),
        2
    );
    assert_eq!(
        code(&heatkern(&[
            "eval", "--model", "sphere2", "--d", "0:1", "--t", "1"
        ])),
        2
    );
    assert_eq!(
        code(&heatkern(&[
            "eval", "--model", "nowhere", "--d", "1", "--t", "1"
        ])),
        2
    );
    assert_eq!(
        code(&heatkern(&["eval", "--model", "sphere2", "--t", "1"])),
        2
    );
    assert_eq!(
        code(&heatkern(&[
            "frac", "kernel", "--alpha", "0.5", "--d", "0.01"
        ])),
        2
    );
    let out = Command::new(env!("CARGO_BIN_EXE_heatkern"))
        .args(["verify", "--only", "fejer"])
        .env("HEATKERN_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn frac_commands() {
    let csv = success(&["frac", "kernel", "--alpha", "0.5", "--d", "0.1:3:8"]);
    let k = column(&csv, "k");
    assert!(k.iter().all(|v| *v > 0.0) && k.windows(2).all(|w| w[1] < w[0]));

    let csv = success(&[
        "frac",
        "heat",
        "--alpha",
        "0.5",
        "--theta",
        "0:3.14159:32",
        "--t",
        "0.1",
    ]);
    let v = column(&csv, "value");
    assert!(v.windows(2).all(|w| w[1] < w[0]));

    let csv = success(&[
        "frac", "apply", "--coeffs", "0,1", "--alpha", "1", "--theta", "0",
    ]);
    assert_eq!(column(&csv, "frac_laplacian_f"), vec![2.0]);

    let r = json(&success(&[
        "frac",
        "cordoba",
        "--coeffs",
        "0,0.7,0,0,0.3",
        "--alpha",
        "0.5",
    ]));
    assert_eq!(r["check"], "cordoba");
    assert_eq!(r["pass"], true);
    let r = json(&success(&[
        "frac",
        "maxprinciple",
        "--coeffs",
        "0,1",
        "--alpha",
        "0.25",
    ]));
    assert!(r["worst_margin"].as_f64().unwrap() >= 0.0);
    let r = json(&success(&["frac", "cm", "--fn", "stretched:0.5"]));
    assert_eq!(r["check"], "cm-check");
    assert_eq!(code(&heatkern(&["frac", "cm", "--fn", "power:1:-1"])), 4);
}

#[test]
fn positivity_sums() {
    let csv = success(&[
        "sum",
        "legendre",
        "--fn",
        "power:1:3",
        "--x",
        "-0.99:0.99:50",
    ]);
    assert!(column(&csv, "value").iter().all(|v| *v > 0.0));
    let csv = success(&["sum", "mehler", "--fn", "power:0.25:2", "--r", "0.5,1,2"]);
    assert!(column(&csv, "value").iter().all(|v| *v > 0.0));
    let csv = success(&["sum", "fejer", "--N", "200", "--x", "-0.999:0.999:101"]);
    assert!(column(&csv, "value").iter().all(|v| *v > 0.0));
    assert_eq!(
        code(&heatkern(&[
            "sum",
            "mehler",
            "--fn",
            "power:1:1",
            "--r",
            "1"
        ])),
        2
    );
}

#[test]
fn verify_single_suites() {
    let out = heatkern(&["verify", "--only", "torus-duality"]);
    assert_eq!(code(&out), 0);
    let v = json(&stdout(&out));
    assert_eq!(v["pass"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 1);
    assert_eq!(v["suites"][0]["check"], "torus-duality");

    let v = json(&success(&["verify", "--only", "fejer", "--N", "200"]));
    assert_eq!(v["suites"][0]["parameters"]["N"], 200);

    assert_eq!(code(&heatkern(&["verify", "--only", "nope"])), 2);
}

#[test]
fn verify_default_run_passes() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    success(&["verify", "--out", path.to_str().unwrap()]);
    let first = fs::read_to_string(&path).unwrap();
    let v = json(&first);
    assert_eq!(v["pass"], true);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 18);
    assert!(suites.iter().all(|s| s["pass"] == true));
}
