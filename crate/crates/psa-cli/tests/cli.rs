use std::path::PathBuf;
use std::process::{Command, Output};

use psa_cli::RunRecord;

fn psa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psa")).args(args).output().expect("binary runs")
}

fn psa_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psa")).args(args).env(key, value).output().expect("binary runs")
}

fn record(out: &Output) -> RunRecord {
    let text = String::from_utf8_lossy(&out.stdout);
    RunRecord::from_json(text.trim()).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(&out.stdout[..]);
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("psa-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn grcar_matrix_run() {
    let out = psa(&["--gen", "grcar:100", "--eps", "0.2", "--alg", "fp-matrix"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    assert!((r.alpha.unwrap() - 3.1252).abs() < 1e-3);
    assert_eq!(r.restarts, 1);
}

#[test]
fn damping_run_matches_published_point() {
    let out = psa(&[
        "--gen", "damping:n=20,xi=0.005,k=25", "--weights", "1,1,1", "--eps", "0.1", "--alg", "fp-nep", "--tol", "1e-10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    assert!((r.alpha.unwrap() - 0.3049280).abs() < 1e-6);
    assert_eq!(r.iterations, 7);
    let z = r.z.unwrap();
    assert!((z.im - 7.7520368).abs() < 1e-6);
}

#[test]
fn oracle_comparison_on_random_matrix() {
    let out = psa(&["--gen", "random:n=8,c1=1,c2=0.5,seed=7", "--eps", "0.1", "--alg", "fp-matrix", "--oracle", "crisscross"]);
    assert_eq!(out.status.code(), Some(0));
    let r = record(&out);
    assert!(r.error_vs_oracle.unwrap() <= 2e-6);
}

#[test]
fn run_is_also_an_explicit_subcommand() {
    let a = record(&psa(&["run", "--gen", "kahan:20", "--eps", "0.1", "--alg", "crisscross"]));
    let b = record(&psa(&["--gen", "kahan:20", "--eps", "0.1", "--alg", "crisscross"]));
    assert_eq!(a.alpha, b.alpha);
}

#[test]
fn json_output_round_trips() {
    let out = psa(&["--gen", "grcar:12", "--eps", "0.3", "--alg", "fp-matrix", "-N", "3", "--oracle", "grid"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let r = record(&out);
    assert_eq!(r.to_json().unwrap(), text.trim());
    assert_eq!(RunRecord::from_json(&r.to_json().unwrap()).unwrap(), r);
}

#[test]
fn non_convergence_exits_with_two() {
    let out = psa(&["--gen", "damping", "--eps", "0.8", "--alg", "fp-nep"]);
    assert_eq!(out.status.code(), Some(2));
    let r = record(&out);
    assert!(!r.converged());
}

#[test]
fn usage_and_data_errors_exit_with_one() {
    let cases: &[&[&str]] = &[
        &["--gen", "foo:3", "--eps", "0.1", "--alg", "grid"],
        &["--gen", "damping", "--eps", "0.1", "--alg", "crisscross"],
        &["--gen", "damping", "--eps", "0.1", "--alg", "second-order"],
        &["--gen", "grcar:10", "--eps", "0.1", "--alg", "fp-matrix", "--weights", "1,1,1"],
        &["--gen", "grcar:10", "--eps", "-1", "--alg", "fp-matrix"],
        &["--gen", "grcar:10", "--alg", "fp-matrix"],
        &["--gen", "grcar:10", "--eps", "0.1", "--alg", "nope"],
        &["--gen", "damping", "--eps", "0.1", "--alg", "fp-nep-const"],
        &["--input", "/nonexistent/file.mtx", "--eps", "0.1", "--alg", "grid"],
        &["sweep", "--gen", "grcar:10", "--alg", "first-order", "--eps-range", "1:0.1:3"],
        &["sweep", "--gen", "grcar:10", "--alg", "first-order", "--eps-range", "0.1:1:0"],
        &["sweep", "--gen", "grcar:10", "--alg", "first-order", "--param-range", "0:1:3", "--eps", "0.1"],
    ];
    for args in cases {
        let out = psa(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(psa(&["--help"]).status.code(), Some(0));
    assert_eq!(psa(&["sweep", "--help"]).status.code(), Some(0));
}

#[test]
fn matrix_market_input() {
    let path = temp_file("diag.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 -1\n2 2 0.5\n");
    let out = psa(&["--input", path.to_str().unwrap(), "--eps", "0.25", "--alg", "crisscross"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((record(&out).alpha.unwrap() - 0.75).abs() < 1e-10);
}

#[test]
fn eps_sweep_slopes() {
    let out = psa(&[
        "sweep", "--gen", "random:n=100,c1=1,c2=0.5,seed=44", "--alg", "first-order,second-order",
        "--eps-range", "1e-3:1e-1:8", "--oracle", "crisscross",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header[0], "problem");
    assert_eq!(rows.len(), 16);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for (alg, lo, hi) in [("first-order", 1.7, 2.3), ("second-order", 2.6, 3.4)] {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r[col("algorithm")] == alg)
            .map(|r| (r[col("eps")].parse::<f64>().unwrap().ln(), r[col("error_vs_oracle")].parse::<f64>().unwrap().ln()))
            .collect();
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        let s = slope(&xs, &ys);
        assert!((lo..=hi).contains(&s), "{alg}: slope {s}");
    }
    let eps: Vec<f64> = rows.iter().map(|r| r[col("eps")].parse().unwrap()).collect();
    assert_eq!(eps[0], 1e-3);
    assert_eq!(eps[15], 1e-1);
}

#[test]
fn viscosity_sweep_first_order_error_is_quadratic_in_eps() {
    let eps = 0.1;
    let out = psa(&[
        "sweep", "--gen", "damping", "--alg", "first-order", "--param-range", "0:100:5", "--eps", "0.1", "--oracle", "grid",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for r in &rows {
        let err: f64 = r[col("error_vs_oracle")].parse().unwrap();
        assert!(err <= 1.0 * eps * eps, "{}: {err}", r[col("problem")]);
    }
    assert!(rows[4][col("problem")].contains("nu=100"));
}

#[test]
fn sweep_order_does_not_depend_on_thread_count() {
    let args = ["sweep", "--gen", "random:n=10,seed=3", "--alg", "fp-matrix,crisscross", "--eps-range", "0.01:0.5:6", "--format", "json"];
    let strip = |out: Output| -> Vec<RunRecord> {
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .map(|l| RunRecord { wall_time_ms: 0.0, ..RunRecord::from_json(l).unwrap() })
            .collect()
    };
    let one = strip(psa_env(&args, "PSA_THREADS", "1"));
    let four = strip(psa_env(&args, "PSA_THREADS", "4"));
    assert_eq!(one.len(), 12);
    assert_eq!(one, four);
    assert_eq!(psa_env(&args, "PSA_THREADS", "0").status.code(), Some(1));
}

#[test]
fn boundary_of_a_scalar_is_the_circle() {
    let path = temp_file("zero.mtx", "%%MatrixMarket matrix array real general\n1 1\n0\n");
    let out = psa(&["boundary", "--input", path.to_str().unwrap(), "--eps", "1", "--re=-1.5:1.5", "--im=-1.5:1.5", "--columns", "31"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["x", "y"]);
    assert!(rows.len() >= 30);
    for r in rows {
        let (x, y): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert!(((x * x + y * y).sqrt() - 1.0).abs() <= 1e-8);
    }
}

#[test]
fn boundary_far_from_the_pseudospectrum_is_empty() {
    let out = psa(&["boundary", "--gen", "grcar:10", "--eps", "0.1", "--re", "50:60", "--im", "50:60", "--columns", "5", "--rows", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = csv_rows(&out);
    assert!(rows.is_empty());
}

#[test]
fn damping_optimum_lies_on_the_boundary() {
    let r = record(&psa(&["--gen", "damping", "--eps", "0.1", "--alg", "fp-nep"]));
    let z = r.z.unwrap();
    let (re, im) = (format!("{}:{}", z.re - 0.05, z.re + 0.05), format!("{}:{}", z.im - 0.3, z.im + 0.3));
    let out = psa(&["boundary", "--gen", "damping", "--eps", "0.1", "--re", &re, "--im", &im, "--columns", "21", "--rows", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = csv_rows(&out);
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    // column spacing is 0.1 / 20
    assert!((max_x - z.re).abs() <= 0.1 / 20.0 + 1e-9, "{max_x} vs {}", z.re);
    // the column closest to the optimum crosses the boundary below and above it
    let col_x = pts.iter().map(|p| p.0).min_by(|a, b| (a - z.re).abs().total_cmp(&(b - z.re).abs())).unwrap();
    let ys: Vec<f64> = pts.iter().filter(|p| p.0 == col_x).map(|p| p.1).collect();
    assert!(ys.iter().any(|&y| y < z.im) && ys.iter().any(|&y| y > z.im), "{ys:?} around {}", z.im);
}
