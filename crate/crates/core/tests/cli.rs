use std::path::Path;
use std::process::{Command, Output};

fn dicke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicke")).args(args).env("NO_COLOR", "1").output().expect("spawn dicke")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Rows of a CSV as (header, records).
fn parse(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn zero_t_sweep_starts_at_one_and_dips() {
    let out = dicke(&["sweep-zero-t", "--set", "model.n_atoms=8,16,32", "--set", "grid.lambda_steps=31"]);
    let (h, rows) = parse(&stdout(&out));
    assert_eq!(rows.len(), 3 * 31);
    let (n, l, d) = (col(&h, "n_atoms"), col(&h, "lambda"), col(&h, "delta"));
    for atoms in ["8", "16", "32"] {
        let series: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r[n] == atoms && !r[d].is_empty())
            .map(|r| (r[l].parse().unwrap(), r[d].parse().unwrap()))
            .collect();
        assert_eq!(series[0], (0.0, 1.0));
        let below: Vec<f64> = series.iter().filter(|(x, _)| *x < 0.5).map(|p| p.1).collect();
        assert!(below.windows(2).all(|w| w[1] < w[0]), "N={atoms}: {below:?}");
        assert!(*below.last().unwrap() < 0.9);
    }
}

#[test]
fn single_point_grid_rejected() {
    let out = dicke(&["sweep-zero-t", "--set", "grid.lambda_steps=1", "--set", "grid.lambda_max=0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kind=config"));
}

#[test]
fn output_is_deterministic_across_threads() {
    let args = ["sweep-finite-t", "--set", "model.n_atoms=20,40", "--set", "grid.lambda_steps=7", "--set", "grid.t_steps=4"];
    let one = stdout(&dicke(&[&args[..], &["--threads", "1"]].concat()));
    let two = stdout(&dicke(&[&args[..], &["--threads", "2"]].concat()));
    let again = stdout(&dicke(&[&args[..], &["--threads", "2"]].concat()));
    assert_eq!(one, two);
    assert_eq!(two, again);
}

#[test]
fn low_temperature_rows_are_flagged() {
    let out = dicke(&[
        "sweep-finite-t",
        "--set",
        "grid.lambda_steps=2",
        "--set",
        "grid.lambda_max=0.3",
        "--set",
        "grid.t_min=0.05",
        "--set",
        "grid.t_max=0.5",
        "--set",
        "grid.t_steps=2",
    ]);
    let (h, rows) = parse(&stdout(&out));
    let (t, flag) = (col(&h, "temperature"), col(&h, "outside_validity"));
    for r in rows {
        let temp: f64 = r[t].parse().unwrap();
        assert_eq!(r[flag], if temp < 0.1 { "1" } else { "0" });
    }
}

#[test]
fn decoupled_witness_row_sits_on_the_boundary() {
    let out = dicke(&["witness", "--set", "grid.lambda_steps=2", "--set", "grid.lambda_max=0.6"]);
    let (h, rows) = parse(&stdout(&out));
    let b: f64 = rows[0][col(&h, "b")].parse().unwrap();
    assert!(b.abs() < 1e-9);
    assert_eq!(rows[1][col(&h, "phase")], "superradiant");
    assert_eq!(rows[1][col(&h, "any_violation")], "1");
}

#[test]
fn finite_temperature_witness_grid_is_clean() {
    let out = dicke(&["witness", "--set", "witness.mode=finite_t", "--set", "grid.lambda_steps=4", "--set", "grid.t_steps=4"]);
    let (h, rows) = parse(&stdout(&out));
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r[col(&h, "violations")] == "0"));
}

#[test]
fn oversized_product_basis_fails_without_leaving_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oracle.csv");
    let out = dicke(&[
        "oracle-compare",
        "--set",
        "oracle.mode=thermal",
        "--set",
        "model.n_atoms=7",
        "--set",
        "grid.beta=0.2",
        "--set",
        "grid.lambda_steps=2",
        "--set",
        "grid.lambda_max=1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error kind=capacity"), "{err}");
    assert!(!Path::new(&path).exists());
}

#[test]
fn thermal_oracle_errors_shrink_with_beta() {
    let out = dicke(&[
        "oracle-compare",
        "--set",
        "oracle.mode=thermal",
        "--set",
        "model.n_atoms=4",
        "--set",
        "grid.beta=0.1,0.2,0.4",
        "--set",
        "grid.lambda_steps=1",
        "--set",
        "grid.lambda_min=1",
        "--set",
        "grid.lambda_max=1",
    ]);
    let (h, rows) = parse(&stdout(&out));
    let e = col(&h, "delta_rel_err");
    let errs: Vec<f64> = rows.iter().map(|r| r[e].parse().unwrap()).collect();
    assert_eq!(errs.len(), 3);
    assert!(errs[0] < errs[1] && errs[1] < errs[2], "{errs:?}");
}

#[test]
fn config_file_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "model.omega = 1\nmodel.omgea = 2\n").unwrap();
    let out = dicke(&["critical", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("run.conf:2") && err.contains("model.omgea"), "{err}");
}

#[test]
fn csv_goes_to_the_requested_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("critical.csv");
    let out = dicke(&["critical", "--set", "grid.lambda_steps=3", "--set", "grid.lambda_max=1", "--out", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("lambda_c = 5.00000000000e-1"));
    let (h, rows) = parse(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2][col(&h, "t_c")], "2.00000000000e0");
}

#[test]
fn synthetic_scaling_fit_is_exact() {
    let text = stdout(&dicke(&["scaling-fit", "--set", "fit.source=synthetic"]));
    let slope: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("slope = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 0.25).abs() < 1e-12);
}
