//! The `parabolic-vqe` binary end to end.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::fixture_path;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parabolic-vqe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Row {
    error: Option<f64>,
    cum_experiments: u64,
}

fn rows(path: &Path) -> Vec<Row> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "iteration,energy,error,cum_experiments,cum_cnots,excitation"
    );
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 6, "{l}");
            Row {
                error: (!f[2].is_empty()).then(|| f[2].parse().unwrap()),
                cum_experiments: f[3].parse().unwrap(),
            }
        })
        .collect()
}

fn run_h2(out: &Path, pool: &str, extra: &[&str]) -> Output {
    let h2 = fixture_path("h2.json");
    let mut args = vec![
        "run",
        "--hamiltonian",
        h2.to_str().unwrap(),
        "--pool",
        pool,
        "--optimizer",
        "parabolic",
        "--selector",
        "energy",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    bin(&args)
}

#[test]
fn run_h2_reaches_exact_energy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h2.csv");
    let o = run_h2(&out, "qubit-excitation", &[]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("status=converged"));
    let r = rows(&out);
    assert!(r.len() >= 2);
    assert!(r.last().unwrap().error.unwrap().abs() < 1e-8);
    let first = fs::read_to_string(&out).unwrap();
    assert!(first.lines().nth(1).unwrap().starts_with("0,") && first.lines().nth(1).unwrap().ends_with(",0,0,hf"));
}

#[test]
fn zero_iterations_write_only_the_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("zero.csv");
    let o = run_h2(&out, "uccsd", &["--max-iterations", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("status=max-iterations"));
    assert_eq!(rows(&out).len(), 1);
}

#[test]
fn identical_runs_write_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(run_h2(&a, "qubit-adapt", &[]).status.success());
    assert!(run_h2(&b, "qubit-adapt", &[]).status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn exact_subcommand() {
    let o = bin(&["exact", "--hamiltonian", fixture_path("h2.json").to_str().unwrap()]);
    assert!(o.status.success());
    let e: f64 = stdout(&o).trim().parse().unwrap();
    assert!((e - -1.1372838344885023).abs() < 1e-8, "{e}");

    let dir = tempfile::tempdir().unwrap();
    let z = dir.path().join("z.json");
    fs::write(
        &z,
        r#"{"format_version":1,"molecule":"z","n_qubits":1,"n_electrons":1,"constant":0.0,
            "terms":[{"coeff":-1.0,"paulis":"Z"}]}"#,
    )
    .unwrap();
    let o = bin(&["exact", "--hamiltonian", z.to_str().unwrap()]);
    assert!(o.status.success());
    // the one-particle sector of −Z is |1⟩ with energy +1; the register minimum is −1
    assert_eq!(stdout(&o).trim(), "1.00000000000");
    fs::write(
        &z,
        r#"{"format_version":1,"molecule":"z","n_qubits":1,"n_electrons":0,"constant":0.0,
            "terms":[{"coeff":-1.0,"paulis":"Z"}]}"#,
    )
    .unwrap();
    // with the |0⟩ sector it is −1
    assert_eq!(
        stdout(&bin(&["exact", "--hamiltonian", z.to_str().unwrap()])).trim(),
        "-1.00000000000"
    );
}

#[test]
fn malformed_input_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n \"format_version\": 1,\n \"n_qubits\": \n}").unwrap();
    let o = bin(&["exact", "--hamiltonian", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"), "{o:?}");
    let o = bin(&[
        "exact",
        "--hamiltonian",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_code_1() {
    assert_eq!(bin(&["run"]).status.code(), Some(1));
    assert_eq!(bin(&["bogus"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let o = run_h2(
        &dir.path().join("x.csv"),
        "qubit-excitation",
        &["--conv-threshold", "-1"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_circuits_reports_every_check() {
    let o = bin(&["verify-circuits"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "{text}");
    assert!(lines[0].starts_with("PASS single-rotation-vs-exponential"));
    assert!(lines[1].starts_with("PASS double-rotation-vs-exponential"));
    assert!(lines[2].starts_with("PASS single-circuit-vs-matrix"));
    assert!(lines[2].contains("first-qubit-most-significant left-to-right"));
    assert!(lines[3].contains("double-circuit-vs-matrix"));
}

#[test]
fn bench_on_h2() {
    let fixtures = tempfile::tempdir().unwrap();
    fs::copy(fixture_path("h2.json"), fixtures.path().join("h2.json")).unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = bin(&[
        "bench",
        "--fixtures",
        fixtures.path().to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    let mut csvs: Vec<_> = fs::read_dir(out.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("h2_"))
        .collect();
    csvs.sort();
    assert_eq!(
        csvs,
        [
            "h2_qubit-adapt_nelder-mead.csv",
            "h2_qubit-adapt_parabolic.csv",
            "h2_qubit-excitation_nelder-mead.csv",
            "h2_qubit-excitation_parabolic.csv",
            "h2_uccsd_nelder-mead.csv",
            "h2_uccsd_parabolic.csv"
        ]
    );
    for name in &csvs {
        let r = rows(&out.path().join(name));
        assert!(r.last().unwrap().error.unwrap() < 1e-6, "{name}");
    }
    let at = |name: &str| {
        rows(&out.path().join(name))
            .iter()
            .find(|r| r.error.unwrap() < 1e-6)
            .unwrap()
            .cum_experiments
    };
    assert!(at("h2_qubit-adapt_parabolic.csv") > at("h2_qubit-excitation_parabolic.csv"));
    assert!(
        fs::read_to_string(out.path().join("summary.csv"))
            .unwrap()
            .lines()
            .count()
            == 7
    );
}

#[test]
fn bench_marks_missing_fixture_and_continues() {
    let out = tempfile::tempdir().unwrap();
    let o = bin(&[
        "bench",
        "--fixtures",
        fixture_path("").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
        "--molecules",
        "h2,absent",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let summary = fs::read_to_string(out.path().join("summary.csv")).unwrap();
    assert_eq!(
        summary
            .lines()
            .filter(|l| l.starts_with("absent,") && l.contains(",failed,"))
            .count(),
        6
    );
    assert_eq!(
        summary
            .lines()
            .filter(|l| l.starts_with("h2,") && l.contains(",converged,"))
            .count(),
        6
    );
}
