use std::path::Path;
use std::process::{Command, Output};

fn mlnmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlnmf")).args(args).output().unwrap()
}

fn synth(dir: &Path) {
    let out = mlnmf(&[
        "synth", "--height", "9", "--width", "9", "--n", "6", "--blobs", "2", "--seed", "4", "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn factorize_writes_factors_trace_and_basis() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    synth(&data);
    let prefix = tmp.path().join("out/run");
    let out = mlnmf(&[
        "factorize", "--data", data.to_str().unwrap(), "--format", "pgm-dir", "--algo", "hals", "--cycle", "fmg",
        "--levels", "3", "--rank", "2", "--budget", "work:20", "--seed", "1", "--trace-every", "2", "--out",
        prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = std::fs::read_to_string(tmp.path().join("out/run.trace.csv")).unwrap();
    assert!(trace.starts_with("elapsed_s,work_units,level,error\n"));
    let v = std::fs::read_to_string(tmp.path().join("out/run.V.csv")).unwrap();
    assert_eq!(v.lines().count(), 81);
    assert!(v.lines().all(|l| l.split(',').count() == 2));
    let w = std::fs::read_to_string(tmp.path().join("out/run.W.csv")).unwrap();
    assert_eq!(w.lines().count(), 2);
    assert!(tmp.path().join("out/run.basis/basis_000.pgm").exists());
    assert!(tmp.path().join("out/run.basis/mosaic.pgm").exists());
}

#[test]
fn csv_input_without_grid_has_no_basis() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("m.csv");
    std::fs::write(&csv, "1,0.5,0\n0.25,1,0.75\n0,0.5,1\n1,1,0.5\n").unwrap();
    let prefix = tmp.path().join("r");
    let out = mlnmf(&[
        "factorize", "--data", csv.to_str().unwrap(), "--format", "csv", "--algo", "anls", "--rank", "2", "--budget",
        "work:5", "--out", prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(tmp.path().join("r.W.csv").exists());
    assert!(!tmp.path().join("r.basis").exists());
}

#[test]
fn bench_is_byte_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    synth(&data);
    let run = |name: &str| {
        let prefix = tmp.path().join(name);
        let out = mlnmf(&[
            "bench", "--data", data.to_str().unwrap(), "--format", "pgm-dir", "--algos", "mu,hals", "--cycles",
            "none,ni,fmg", "--levels", "2,3", "--rank", "2", "--runs", "3", "--budget", "work:12", "--seed", "5",
            "--out", prefix.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(tmp.path().join(format!("{name}.summary.txt")).exists());
        std::fs::read(tmp.path().join(format!("{name}.summary.csv"))).unwrap()
    };
    let first = run("a");
    assert_eq!(first, run("b"));
    let text = String::from_utf8(first).unwrap();
    // header + mu/hals x (none L1, ni L2, ni L3, fmg L2, fmg L3)
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn transfer_check_reports_each_level() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    synth(&data);
    let out = mlnmf(&["transfer-check", "--data", data.to_str().unwrap(), "--levels", "3"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.matches("s_M = ").count(), 2);
    assert!(stdout.contains("3x3 (coarsest)"));
}

#[test]
fn exit_codes_follow_error_class() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(mlnmf(&["factorize", "--rank", "x"]).status.code(), Some(2));
    assert_eq!(mlnmf(&["synth", "--height", "0", "--width", "3", "--n", "1", "--out", "x"]).status.code(), Some(2));

    let missing = tmp.path().join("nothing");
    let out = mlnmf(&["transfer-check", "--data", missing.to_str().unwrap(), "--levels", "2"]);
    assert_eq!(out.status.code(), Some(3));

    let csv = tmp.path().join("neg.csv");
    std::fs::write(&csv, "1,2\n3,-4\n").unwrap();
    let out = mlnmf(&[
        "factorize", "--data", csv.to_str().unwrap(), "--format", "csv", "--algo", "mu", "--rank", "1", "--budget",
        "work:1", "--out", tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));

    let data = tmp.path().join("data");
    synth(&data);
    let out = mlnmf(&[
        "factorize", "--data", data.to_str().unwrap(), "--algo", "mu", "--cycle", "vc", "--levels", "9", "--rank",
        "2", "--budget", "work:4", "--out", tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
