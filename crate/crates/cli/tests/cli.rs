use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn magtool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magtool")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Independent closed form for three points on a line.
fn three_points(a: f64, b: f64, t: f64) -> f64 {
    1.0 + (t * a / 2.0).tanh() + (t * b / 2.0).tanh()
}

#[test]
fn mag_matches_line_formula() {
    let out = magtool(&["mag", "--points-1d", "0,1,3", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let m = r["result"]["magnitude"].as_f64().unwrap();
    assert!((m - three_points(1.0, 2.0, 1.0)).abs() < 1e-12);
    assert!((m - 2.2237113).abs() < 1e-7);
    assert_eq!(r["result"]["status"], "UniquePD");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["command"][0], "mag");
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn pixel_intrinsic_l_tromino() {
    let out = magtool(&["pixel", "--ascii", "##\\n#.", "--intrinsic"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["V"], serde_json::json!(["1", "4", "3"]));
    assert_eq!(r["result"]["magnitude"], "15/4");
    let csv = magtool(&["pixel", "--ascii", "##\n#.", "--intrinsic", "--format", "csv"]);
    assert_eq!(stdout(&csv), "i,V\n0,1\n1,4\n2,3\n");
}

#[test]
fn pixel_weights_total_mass() {
    let out = magtool(&["pixel", "--ascii", "##\\n#.", "--weights", "--verify"]);
    let r = report(&out);
    assert_eq!(r["result"]["total_mass"], "15/4");
    assert!(r["result"]["potential_deviation"].as_f64().unwrap() < 1e-12);
    let ie = report(&magtool(&["pixel", "--ascii", "##\\n#.", "--weights", "--ie"]));
    assert_eq!(ie["result"]["faces"], r["result"]["faces"]);
}

#[test]
fn pixel_convexity_and_bounds() {
    let r = report(&magtool(&["pixel", "--ascii", "#.\\n.#", "--convexity"]));
    assert_eq!(r["result"]["l1_convex"], true);
    let r = report(&magtool(&["pixel", "--ascii", "#.#", "--convexity"]));
    assert_eq!(r["result"]["l1_convex"], false);
    let body = r#"{"dim":2,"kind":"box","vertices":[[0,0],[1,1]]}"#;
    let r = report(&magtool(&["pixel", "--bounds", "--body", body, "--lambda", "1/4", "--t", "1"]));
    let (lo, hi) = (r["result"]["lower"].as_f64().unwrap(), r["result"]["upper"].as_f64().unwrap());
    assert!((lo - 2.25).abs() < 1e-12 && (hi - 2.25).abs() < 1e-12);
}

#[test]
fn k32_small_scale_warns_and_pole_is_undefined() {
    let out = magtool(&["mag", "--graph", "k32", "--t", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["positive_definite"], false);
    assert!(!r["warnings"].as_array().unwrap().is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let pole = (2f64.sqrt()).ln().to_string();
    let out = magtool(&["mag", "--graph", "k32", "--t", &pole]);
    assert_eq!(out.status.code(), Some(3));
    assert!(report(&out)["result"]["magnitude"].is_null());
    // sweeps embed the status instead of failing
    let out = magtool(&["magfn", "--graph", "k32", "--tmin", &pole, "--tmax", "1", "--steps", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("t,magnitude,status,positive_definite,residual\n"));
    assert!(text.lines().nth(1).unwrap().contains(",,Undefined,"));
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        vec!["mag", "--points-1d", "0,0,1", "--t", "1"],
        vec!["mag", "--graph", "q7", "--t", "1"],
        vec!["mag", "--points-1d", "0,1", "--t", "-1"],
        vec!["mag", "--matrix", "/nonexistent.csv", "--t", "1"],
        vec!["oracle", "ball", "--n", "4", "--r", "1"],
        vec!["pixel", "--ascii", "#x", "--intrinsic"],
        vec!["mag", "--t", "1"],
    ] {
        assert_eq!(magtool(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unattainable_tolerance_exits_4() {
    let spec = r#"{"kind":"ball_sample","params":{"dim":2,"radius":1,"count":60,"p":2},"seed":3}"#;
    let out = magtool(&["diversity", "--spec", spec, "--t", "20", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(4));
    let out = magtool(&["diversity", "--spec", spec, "--t", "20"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn stdin_matrix_and_file_matrix() {
    let csv = "0,1,2\n1,0,1\n2,1,0\n";
    let mut child = Command::new(env!("CARGO_BIN_EXE_magtool"))
        .args(["mag", "--stdin-matrix", "--t", "1"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(csv.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let m = report(&out)["result"]["magnitude"].as_f64().unwrap();
    assert!((m - three_points(1.0, 1.0, 1.0)).abs() < 1e-12);

    let path = std::env::temp_dir().join(format!("magtool-{}.csv", std::process::id()));
    std::fs::write(&path, csv).unwrap();
    let a = report(&magtool(&["mag", "--matrix", path.to_str().unwrap(), "--t", "1"]));
    std::fs::write(&path, "0,1,3\n1,0,2\n3,2,0\n").unwrap();
    let b = report(&magtool(&["mag", "--matrix", path.to_str().unwrap(), "--t", "1"]));
    std::fs::remove_file(&path).unwrap();
    // same argv, different file contents
    assert_ne!(a["inputs_digest"], b["inputs_digest"]);
    assert!((a["result"]["magnitude"].as_f64().unwrap() - m).abs() < 1e-15);
}

/// Report text with the timing line removed; everything else must match byte for byte.
fn without_timing(out: &Output) -> String {
    stdout(out).lines().filter(|l| !l.trim_start().starts_with("\"timing_ms\"")).collect::<Vec<_>>().join("\n")
}

#[test]
fn reports_are_deterministic() {
    let spec = r#"{"kind":"ball_sample","params":{"dim":3,"radius":1,"count":40,"p":2}}"#;
    let runs = [
        vec!["mag", "--spec", spec, "--seed", "7", "--t", "2"],
        vec!["diversity", "--graph", "c5", "--t", "0.7"],
        vec!["magfn", "--points-1d", "0,0.5,2", "--tmin", "0.1", "--tmax", "10", "--steps", "7", "--log"],
        vec!["dim", "--points-1d", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1", "--tmin", "1", "--tmax", "10", "--samples", "8"],
    ];
    for args in runs {
        let a = magtool(&args);
        let b = magtool(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(without_timing(&a), without_timing(&b));
        let csv = [args.clone(), vec!["--format", "csv"]].concat();
        assert_eq!(magtool(&csv).stdout, magtool(&csv).stdout);
    }
    let a = report(&magtool(&["mag", "--spec", spec, "--seed", "7", "--t", "2"]));
    let b = report(&magtool(&["mag", "--spec", spec, "--seed", "8", "--t", "2"]));
    assert_ne!(a["result"]["magnitude"], b["result"]["magnitude"]);
}

#[test]
fn check_and_weights() {
    let r = report(&magtool(&["check", "--graph", "k32", "--ts", "0.05,1"]));
    assert_eq!(r["result"]["is_positive_definite"], false);
    assert_eq!(r["result"]["negative_type_verdict"], "CertifiedNot");
    let r = report(&magtool(&["check", "--points-1d", "0,1,5"]));
    assert_eq!(r["result"]["negative_type_verdict"], "CertifiedNegativeType");
    let text = stdout(&magtool(&["weights", "--points-1d", "0,1", "--t", "1", "--format", "csv"]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "index,weight");
    // two points at distance 1: each weight is 1/(1 + e^{-1})
    let w: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((w - 1.0 / (1.0 + (-1f64).exp())).abs() < 1e-14);
}

#[test]
fn diversity_two_points_and_k33() {
    let r = report(&magtool(&["diversity", "--points-1d", "0,1", "--t", "1"]));
    let expected = 2.0 / (1.0 + (-1f64).exp());
    assert!((r["result"]["diversity"].as_f64().unwrap() - expected).abs() < 1e-12);
    let fast = report(&magtool(&["diversity", "--graph", "k3,3", "--t", "0.1"]));
    let exact = report(&magtool(&["diversity", "--graph", "k3,3", "--t", "0.1", "--exact"]));
    let (a, b) = (fast["result"]["diversity"].as_f64().unwrap(), exact["result"]["diversity"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    assert_eq!(fast["result"]["non_convex"], true);
}

#[test]
fn dimension_of_a_grid() {
    let pts: Vec<String> = (0..=200).map(|i| (i as f64 / 200.0).to_string()).collect();
    let list = pts.join(",");
    let r = report(&magtool(&["dim", "--points-1d", &list, "--tmin", "10", "--tmax", "200"]));
    let slope = r["result"]["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.1, "{slope}");
    // four usable samples are needed after the two extremes are dropped
    let dim = |extra: &[&str]| magtool(&[&["dim", "--points-1d", "0,1", "--tmin", "1", "--tmax", "2"], extra].concat());
    assert_eq!(dim(&["--samples", "5"]).status.code(), Some(2));
    assert_eq!(dim(&["--samples", "6"]).status.code(), Some(0));
    assert_eq!(dim(&["--samples", "4", "--keep-extremes"]).status.code(), Some(0));
}

#[test]
fn oracles() {
    let r = report(&magtool(&["oracle", "ball", "--n", "3", "--r", "2"]));
    // 1 + 2R + R² + R³/6 at R = 2
    assert!((r["result"]["magnitude"].as_f64().unwrap() - (1.0 + 4.0 + 4.0 + 8.0 / 6.0)).abs() < 1e-12);
    assert_eq!(r["result"]["exact"], "31/3");
    let r = report(&magtool(&["oracle", "cantor", "--t", "1"]));
    assert!((r["result"]["magnitude"].as_f64().unwrap() - 1.498350431588).abs() < 1e-11);
    let r = report(&magtool(&["oracle", "interval", "--a", "-1", "--b", "1", "--t", "3"]));
    assert_eq!(r["result"]["magnitude"].as_f64().unwrap(), 4.0);
    let r = report(&magtool(&["oracle", "line", "--points-1d", "3,0,1", "--t", "1"]));
    assert!((r["result"]["magnitude"].as_f64().unwrap() - three_points(1.0, 2.0, 1.0)).abs() < 1e-14);
    let r = report(&magtool(&["oracle", "gaps", "--gaps", r#"{"hull":[0,1],"gaps":[]}"#, "--t", "2"]));
    assert!((r["result"]["magnitude"].as_f64().unwrap() - 2.0).abs() < 1e-14);
    let r = report(&magtool(&["oracle", "asymptotic", "--n", "2", "--p", "1", "--volume", "3"]));
    assert!((r["result"]["leading_coefficient"].as_f64().unwrap() - 0.75).abs() < 1e-14);
    let r = report(&magtool(&["oracle", "conjecture", "--n", "3", "--r", "1/2"]));
    assert_eq!(r["result"]["rational"]["difference"], "0");
    let r = report(&magtool(&["oracle", "sphere", "--n", "2", "--r", "1"]));
    assert!(r["result"]["magnitude"].as_f64().unwrap() > 1.0);
    let csv = stdout(&magtool(&["oracle", "cantor", "--t", "1", "--format", "csv"]));
    assert!(csv.starts_with("key,value\n"));
}

#[test]
fn approx_sweep() {
    let fam = r#"{"family":"interval_grid","a":0,"b":2}"#;
    let text = stdout(&magtool(&["approx", "--family", fam, "--levels", "2,3,5,9", "--t", "1", "--format", "csv"]));
    let mags: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(text.lines().next().unwrap(), "level,n_points,magnitude,increment");
    assert!(mags.windows(2).all(|w| w[1] >= w[0]) && *mags.last().unwrap() < 2.0);
}
