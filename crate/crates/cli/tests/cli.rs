use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_haar-hankel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Header plus rows of floats.
fn table(p: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(p).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column_max(rows: &[Vec<f64>], col: usize) -> f64 {
    rows.iter().map(|r| r[col]).fold(0.0, f64::max)
}

#[test]
fn coefficient_row_counts() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "c.csv");
    let g = ["coeffs", "--function", "gaussian", "--a", "1", "--h", "6"];

    run_ok(&[&g[..], &["--level", "0", "--output", s(&out)]].concat());
    let (header, rows) = table(&out);
    assert_eq!(header, ["j", "k", "value"]);
    assert_eq!(rows.len(), 2);

    run_ok(&[&g[..], &["--level", "3", "--output", s(&out)]].concat());
    assert_eq!(table(&out).1.len(), 16);

    run_ok(&[&g[..], &["--level", "3", "--eps", "1e-3", "--output", s(&out)]].concat());
    let (_, rows) = table(&out);
    assert!(rows.len() <= 16);
    assert_eq!(rows[0][0], -1.0);
    assert!(rows[1..].iter().all(|r| r[2].abs() > 1e-3));
}

#[test]
fn transform_starts_at_zero_and_improves_with_level() {
    let dir = TempDir::new().unwrap();
    let mut maxima = Vec::new();
    for level in ["3", "8"] {
        let out = path(&dir, &format!("t{level}.csv"));
        run_ok(&[
            "transform", "--function", "gaussian", "--a", "1", "--h", "6", "--level", level,
            "--pmin", "0", "--pmax", "10", "--pcount", "101", "--compare-analytic",
            "--output", s(&out),
        ]);
        let (header, rows) = table(&out);
        assert_eq!(header, ["p", "value", "exact", "abs_err"]);
        assert_eq!(rows.len(), 101);
        assert_eq!(rows[0][1], 0.0);
        maxima.push(column_max(&rows, 3));
    }
    assert!(maxima[0] < 2e-2, "J=3 max error {}", maxima[0]);
    assert!(maxima[1] < maxima[0]);
}

#[test]
fn error_study_is_ordered_by_level() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "e.csv");
    run_ok(&[
        "error-study", "--function", "gaussian", "--a", "1", "--h", "6", "--levels", "2,3,4",
        "--pcount", "81", "--output", s(&out),
    ]);
    let (header, rows) = table(&out);
    assert_eq!(header, ["p", "err_J2", "err_J3", "err_J4"]);
    let m: Vec<f64> = (1..4).map(|c| column_max(&rows, c)).collect();
    assert!(m[0] >= m[1] && m[1] >= m[2], "{m:?}");

    run_ok(&[
        "error-study", "--function", "gaussian", "--levels", "2,3", "--pmin", "0", "--pmax",
        "0", "--pcount", "1", "--output", s(&out),
    ]);
    let (_, rows) = table(&out);
    assert_eq!(rows, vec![vec![0.0, 0.0, 0.0]]);
}

#[test]
fn error_study_needs_two_levels() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "error-study", "--function", "gaussian", "--level", "3", "--output",
        s(&path(&dir, "e.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coefficient_file_round_trip_is_bit_identical() {
    let dir = TempDir::new().unwrap();
    let coeffs = path(&dir, "c.csv");
    let direct = path(&dir, "direct.csv");
    let reread = path(&dir, "reread.csv");
    let grid = ["--pmin", "0", "--pmax", "20", "--pcount", "57"];
    for order in ["0", "1"] {
        run_ok(&["coeffs", "--function", "gaussian", "--a", "1.3", "--h", "5", "--level", "6",
            "--eps", "1e-6", "--output", s(&coeffs)]);
        run_ok(&[&["transform", "--function", "gaussian", "--a", "1.3", "--h", "5", "--level",
            "6", "--eps", "1e-6", "--order", order, "--output", s(&direct)][..], &grid].concat());
        run_ok(&[&["transform", "--coeffs", s(&coeffs), "--h", "5", "--order", order,
            "--output", s(&reread)][..], &grid].concat());
        assert_eq!(std::fs::read(&direct).unwrap(), std::fs::read(&reread).unwrap());
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let samples = path(&dir, "s.csv");
    let mut text = String::from("r,value\n");
    for i in 0..=40 {
        let r = i as f64 * 0.1;
        text.push_str(&format!("{r},{}\n", (-r * r).exp() * r));
    }
    std::fs::write(&samples, text).unwrap();
    let outputs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = path(&dir, &format!("t{i}.csv"));
            run_ok(&[
                "transform", "--function", "samples", "--input", s(&samples), "--level", "5",
                "--order", "0", "--pcount", "30", "--compare-analytic", "--output", s(&out),
            ]);
            std::fs::read(out).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn sampled_error_study_uses_the_oracle() {
    let dir = TempDir::new().unwrap();
    let samples = path(&dir, "s.csv");
    std::fs::write(&samples, "r,value\n0,1\n0.5,1\n1,0\n").unwrap();
    let out = path(&dir, "e.csv");
    run_ok(&[
        "error-study", "--function", "samples", "--input", s(&samples), "--levels", "3,6",
        "--pcount", "21", "--output", s(&out),
    ]);
    let (_, rows) = table(&out);
    assert!(column_max(&rows, 2) < column_max(&rows, 1));
}

#[test]
fn bench_rows_cover_levels_and_doubled_grids() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "b.csv");
    run_ok(&[
        "bench", "--function", "gaussian", "--levels", "3,4", "--pcount", "10", "--output",
        s(&out),
    ]);
    let (header, rows) = table(&out);
    assert_eq!(header, ["p_count", "J", "series_ms", "oracle_ms", "max_abs_diff"]);
    let shape: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    assert_eq!(shape, [(10.0, 3.0), (20.0, 3.0), (10.0, 4.0), (20.0, 4.0)]);
    assert!(rows.iter().all(|r| r[4] < 1e-9));
}

#[test]
fn malformed_samples_exit_3_with_line_number() {
    let dir = TempDir::new().unwrap();
    let samples = path(&dir, "s.csv");
    std::fs::write(&samples, "r,value\n0,1\n0.5,2\n0.4,3\n").unwrap();
    let out = run(&[
        "coeffs", "--function", "samples", "--input", s(&samples), "--output",
        s(&path(&dir, "c.csv")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    let missing = run(&[
        "coeffs", "--function", "samples", "--input", s(&path(&dir, "nope.csv")), "--output",
        s(&path(&dir, "c.csv")),
    ]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn argument_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "o.csv");
    let cases: [&[&str]; 6] = [
        &["coeffs", "--function", "gaussian", "--level", "31", "--output", s(&out)],
        &["coeffs", "--function", "gaussian", "--a", "-1", "--output", s(&out)],
        &["transform", "--function", "gaussian", "--pmin", "5", "--pmax", "1", "--output", s(&out)],
        &["transform", "--function", "gaussian", "--order", "2", "--output", s(&out)],
        &["coeffs", "--output", s(&out)],
        &["coeffs", "--function", "gaussian", "--output", "/nonexistent-dir/o.csv"],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    assert!(!out.exists());
}

#[test]
fn convergence_failure_exits_4_and_leaves_no_file() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "t.csv");
    let status = run(&[
        "transform", "--function", "gaussian", "--order", "0", "--pcount", "3",
        "--compare-analytic", "--max-panels", "2", "--output", s(&out),
    ]);
    assert_eq!(status.status.code(), Some(4));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
