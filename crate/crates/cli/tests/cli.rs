use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use spexpm::io::{generate, read_matrix_market, write_matrix_market};
use spexpm::{expm, Csr, ExpmOptions};
use tempfile::TempDir;

fn spexpm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spexpm")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn summary_value(summary: &str, key: &str) -> String {
    summary
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no '{key}' in summary:\n{summary}"))
        .to_string()
}

fn without_timing(summary: &str) -> String {
    summary.lines().filter(|l| !l.starts_with("wall_time_s")).collect::<Vec<_>>().join("\n")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tridiagonal_run_summary_and_diagnostics() {
    let dir = TempDir::new().unwrap();
    let diag = dir.path().join("diag.csv");
    let out = spexpm(&["expm", "--gen", "tridiag:10000:1:-2:1", "--diag", path_str(&diag)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout(&out);
    assert_eq!(summary_value(&summary, "M"), "20");
    assert_eq!(summary_value(&summary, "N"), "8");
    assert_eq!(summary_value(&summary, "M_eff"), "9");

    let csv = fs::read_to_string(&diag).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "phase,step,nnz,bandwidth_l,filter_threshold,dropped_norm,filter_iterations"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.iter().filter(|r| r[0] == "taylor").count(), 20);
    let bands: Vec<usize> = rows.iter().filter(|r| r[0] == "squaring").map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(bands.len(), 8);
    assert!(bands.iter().all(|&b| b <= 64));
    assert!((30..=46).contains(bands.last().unwrap()));
}

#[test]
fn zero_matrix_gives_identity() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("e.mtx");
    let out = spexpm(&["expm", "--gen", "tridiag:6:0:0:0", "--materialize-identity", "--out", path_str(&out_path)]);
    assert!(out.status.success());
    let summary = stdout(&out);
    assert_eq!(summary_value(&summary, "M"), "0");
    assert_eq!(summary_value(&summary, "N"), "0");
    let file = read_matrix_market::<f64>(&out_path).unwrap();
    assert!(!file.incremental);
    assert_eq!(file.matrix, Csr::identity(6));
}

#[test]
fn output_round_trips_and_matches_library() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("h.mtx");
    let h: Csr = generate(&"randsym:40:0.1".parse().unwrap(), 5).unwrap();
    write_matrix_market(fs::File::create(&input).unwrap(), &h, false).unwrap();

    let out_path = dir.path().join("t.mtx");
    let out = spexpm(&["expm", path_str(&input), "--tol", "1e-12", "--out", path_str(&out_path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let file = read_matrix_market::<f64>(&out_path).unwrap();
    assert!(file.incremental);

    let reread = read_matrix_market::<f64>(&input).unwrap().matrix;
    assert_eq!(reread, h);
    let direct = expm(&h, 1e-12, &ExpmOptions::default()).unwrap();
    assert_eq!(file.matrix, direct.t_hat);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let mut summaries = Vec::new();
    let mut files = Vec::new();
    for k in 0..2 {
        let diag = dir.path().join(format!("d{k}.csv"));
        let out_path = dir.path().join(format!("o{k}.mtx"));
        let out = spexpm(&[
            "expm",
            "--gen",
            "randn:80:0.05",
            "--seed",
            "17",
            "--tol",
            "1e-10",
            "--diag",
            path_str(&diag),
            "--out",
            path_str(&out_path),
        ]);
        assert!(out.status.success());
        summaries.push(without_timing(&stdout(&out)));
        files.push((fs::read(&diag).unwrap(), fs::read(&out_path).unwrap()));
    }
    assert_eq!(summaries[0], summaries[1]);
    assert_eq!(files[0], files[1]);

    let other = spexpm(&["expm", "--gen", "randn:80:0.05", "--seed", "18", "--tol", "1e-10"]);
    assert_ne!(without_timing(&stdout(&other)), summaries[0]);
}

#[test]
fn compare_small_matrix() {
    let out = spexpm(&["compare", "--gen", "small:2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("oracle = closed form"));
    let error_of = |method: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(method)).unwrap();
        line.split_whitespace().nth(1).unwrap().parse().unwrap()
    };
    assert!(error_of("engine") <= 1e-13);
    assert!(error_of("ssat") >= 1e-12);
}

#[test]
fn compare_without_oracle_warns() {
    let out = spexpm(&["compare", "--gen", "randsym:30:0.1", "--tol", "1e-10"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(stdout(&out).contains("oracle = none"));
}

#[test]
fn bandwidth_report() {
    let out = spexpm(&["bandwidth", "--gen", "tridiag:100:1:-2:1"]);
    let text = stdout(&out);
    assert_eq!(summary_value(&text, "l1"), "1");
    assert_eq!(summary_value(&text, "l"), "2");
    assert_eq!(summary_value(&text, "nnz"), "298");

    let dir = TempDir::new().unwrap();
    let path = dir.path().join("dense.mtx");
    let dense = Csr::from_dense(&vec![vec![1.0; 3]; 3]).unwrap();
    write_matrix_market(fs::File::create(&path).unwrap(), &dense, false).unwrap();
    let text = stdout(&spexpm(&["bandwidth", path_str(&path)]));
    assert_eq!(summary_value(&text, "l1"), "2");
    assert_eq!(summary_value(&text, "l2"), "2");
    assert_eq!(summary_value(&text, "l"), "4");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    };
    let short = write("short.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n2 2 2.0\n");
    let complex = write("complex.mtx", "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1.0 0.0\n");
    let infinite = write("inf.mtx", "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 inf\n");

    let code = |args: &[&str]| spexpm(args).status.code().unwrap();
    assert_eq!(code(&["expm", path_str(&short)]), 3);
    assert_eq!(code(&["expm", path_str(&complex)]), 3);
    assert_eq!(code(&["expm", "--gen", "nonsense:4"]), 3);
    assert_eq!(code(&["expm", "--gen", "small:1", "--tol", "1e-20"]), 4);
    assert_eq!(code(&["expm", "--gen", "tridiag:2000:1:-2:1", "--unfiltered", "--mem-cap", "100000"]), 5);
    assert_eq!(code(&["expm", path_str(&dir.path().join("missing.mtx"))]), 6);
    assert_eq!(code(&["expm", path_str(&infinite)]), 7);
    assert_eq!(code(&["expm"]), 2);
}
