//! Black-box tests of the `bfmle` binary.

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bfmle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfmle"))
        .args(args)
        .env_remove("BF_SEED")
        .output()
        .expect("spawn bfmle")
}

fn json(args: &[&str]) -> Value {
    let out = bfmle(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    (v.as_f64().expect("number") - want).abs() <= tol
}

#[test]
fn bound_example() {
    let v = json(&["bound", "--n", "5", "--m", "5", "--gamma", "0.5"]);
    assert!(close(&v["bound"], 0.023, 5e-4));
    assert!(close(&v["c_n"], 2.0, 1e-12));
    assert!(close(&v["dof"], 4.0, 0.0));
}

#[test]
fn cusps_example() {
    let v = json(&["cusps", "--r", "1"]);
    let pts: Vec<(f64, f64)> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
        .collect();
    for want in [(1.0, 2.0), (1.0, -2.0), (-1.0, 2.0), (-1.0, -2.0)] {
        assert!(pts
            .iter()
            .any(|p| (p.0 - want.0).abs() < 1e-12 && (p.1 - want.1).abs() < 1e-12));
    }
}

#[test]
fn roots_example() {
    let v = json(&[
        "roots", "--a3", "2", "--a2", "-12", "--a1", "18", "--a0", "-4",
    ]);
    let roots: Vec<f64> = v["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let want = [2.0 - 3f64.sqrt(), 2.0, 2.0 + 3f64.sqrt()];
    assert_eq!(roots.len(), 3);
    for (got, want) in roots.iter().zip(want) {
        assert!((got - want).abs() < 1e-12, "{roots:?}");
    }
    assert!(close(&v["discriminant"], 1728.0, 1e-9));
    assert_eq!(v["degenerate"], Value::Bool(false));
}

#[test]
fn classify_cusp() {
    let v = json(&["classify", "--gamma", "1", "--delta", "2", "--r", "1"]);
    assert_eq!(v["region"], "boundary_cusp");
    assert!(close(&v["prediction"]["limit_prob_three_roots"], 0.0, 0.0));
    let v = json(&["classify", "--gamma", "1", "--delta", "4", "--r", "1"]);
    assert_eq!(v["region"], "three_roots");
    assert!(close(&v["prediction"]["limit_prob_three_roots"], 1.0, 0.0));
}

#[test]
fn curve_is_csv_on_the_boundary() {
    let out = bfmle(&[
        "curve",
        "--r",
        "1",
        "--gamma-min",
        "0.5",
        "--gamma-max",
        "3",
        "--steps",
        "6",
    ]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["gamma", "delta"]);
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let (g, d): (f64, f64) = (rec[0].parse().unwrap(), rec[1].parse().unwrap());
        let scale = 1f64.max(g).max(d.abs()).powi(6);
        assert!(
            bfmle_core::big_d(g, d, 1.0).abs() <= 1e-6 * scale,
            "({g}, {d})"
        );
        rows += 1;
    }
    assert!(rows >= 12, "both signs of delta for every gamma");
}

#[test]
fn fit_from_summary_flags() {
    let v = json(&[
        "fit", "--nx", "10", "--mx", "4", "--vx", "1", "--ny", "10", "--my", "0", "--vy", "1",
    ]);
    assert!(close(&v["lrt"], 10.0 * 16f64.ln(), 1e-9));
    assert!(close(&v["mu_hat"], 2.0 - 3f64.sqrt(), 1e-12));
    assert_eq!(v["multimodal"], Value::Bool(true));
    let kinds: Vec<&str> = v["stationary_points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["local_max", "saddle", "local_max"]);
}

#[test]
fn fit_unbiased_conversion() {
    // Divisor n - 1 variance 10/9 equals divisor-n variance 1 at n = 10.
    let a = json(&[
        "fit", "--nx", "10", "--mx", "1", "--vx", "1", "--ny", "10", "--my", "0", "--vy", "2",
    ]);
    let b = json(&[
        "fit",
        "--nx",
        "10",
        "--mx",
        "1",
        "--vx",
        "1.1111111111111112",
        "--ny",
        "10",
        "--my",
        "0",
        "--vy",
        "2.2222222222222223",
        "--unbiased",
    ]);
    assert!(close(&b["mu_hat"], a["mu_hat"].as_f64().unwrap(), 1e-12));
}

#[test]
fn fit_from_data_files() {
    let dir = tempfile::tempdir().unwrap();
    let xs = [1.2, 0.4, 2.2, 1.9, 0.7];
    let ys = [-0.3, 0.8, 0.1, 0.5];

    let grouped = dir.path().join("data.csv");
    let mut text = String::from("group,value\n");
    xs.iter().for_each(|x| text.push_str(&format!("x,{x}\n")));
    ys.iter().for_each(|y| text.push_str(&format!("y,{y}\n")));
    fs::write(&grouped, text).unwrap();

    let (xf, yf) = (dir.path().join("x.txt"), dir.path().join("y.txt"));
    fs::write(&xf, xs.iter().map(|x| format!("{x}\n")).collect::<String>()).unwrap();
    fs::write(
        &yf,
        format!(
            "value\n{}",
            ys.iter().map(|y| format!("{y}\n")).collect::<String>()
        ),
    )
    .unwrap();

    let a = json(&["fit", "--data", grouped.to_str().unwrap()]);
    let b = json(&[
        "fit",
        "--x-file",
        xf.to_str().unwrap(),
        "--y-file",
        yf.to_str().unwrap(),
    ]);
    assert_eq!(a, b);

    let s = bfmle_core::summarize(&xs, &ys).unwrap();
    let fit = bfmle_core::fit_null(&s);
    assert!(close(&a["mu_hat"], fit.mle.params.mu, 0.0));
    assert!(close(&a["lrt"], bfmle_core::lrt_statistic(&s), 0.0));
}

#[test]
fn bad_data_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "group,value\nz,1\n").unwrap();
    let out = bfmle(&["fit", "--data", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let missing = bfmle(&["fit", "--data", "/nonexistent/file.csv"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn degenerate_variance_is_a_domain_error() {
    let out = bfmle(&[
        "fit", "--nx", "5", "--mx", "1", "--vx", "0", "--ny", "5", "--my", "0", "--vy", "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn simulate_csv_shape_and_repeatability() {
    let args = [
        "simulate", "--n", "10", "--m", "12", "--mux", "1", "--reps", "3000", "--seed", "5",
    ];
    let first = bfmle(&args);
    let second = bfmle(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let text = String::from_utf8(first.stdout).unwrap();
    let (echo, table) = text.split_once('\n').unwrap();
    let config: Value = serde_json::from_str(echo.strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(config["seed"], 5);
    assert_eq!(config["m"], 12);
    let mut rdr = csv::Reader::from_reader(table.as_bytes());
    assert_eq!(
        rdr.headers().unwrap(),
        vec![
            "delta",
            "p_hat",
            "std_err",
            "replications",
            "degenerate_count"
        ]
    );
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 1);
    let reps: u64 = rows[0][3].parse().unwrap();
    let degenerate: u64 = rows[0][4].parse().unwrap();
    assert_eq!(reps + degenerate, 3000);
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_bfmle"));
        cmd.args([
            "simulate", "--n", "8", "--m", "8", "--mux", "1.5", "--reps", "2000",
        ])
        .args(extra);
        match env {
            Some(s) => cmd.env("BF_SEED", s),
            None => cmd.env_remove("BF_SEED"),
        };
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("77"), &[]), run(None, &["--seed", "77"]));
    assert_eq!(
        run(Some("77"), &["--seed", "3"]),
        run(None, &["--seed", "3"])
    );
    assert_ne!(run(None, &["--seed", "77"]), run(None, &["--seed", "3"]));
}

#[test]
fn sweep_rows_follow_deltas() {
    let out = bfmle(&[
        "sweep",
        "--n",
        "15",
        "--m",
        "15",
        "--deltas",
        "1.8,2,2.2",
        "--reps",
        "4000",
        "--seed",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let (_, table) = text.split_once('\n').unwrap();
    let deltas: Vec<f64> = csv::Reader::from_reader(table.as_bytes())
        .records()
        .map(|r| r.unwrap()[0].parse().unwrap())
        .collect();
    assert_eq!(deltas, [1.8, 2.0, 2.2]);
}

#[test]
fn floats_round_trip() {
    let v = json(&["bound", "--n", "10", "--m", "10", "--gamma", "0.5"]);
    let want = bfmle_core::multimodality_bound(10, 10, 0.5).unwrap().bound;
    assert_eq!(v["bound"].as_f64().unwrap(), want);
}
