use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use oscar_cli::io::{read_vector, write_matrix, write_vector};
use oscar_cli::results::{BENCH_HEADER, PROX_BENCH_HEADER, SWEEP_HEADER, TRACE_HEADER};
use oscar_core::DenseMatrix;
use tempfile::TempDir;

fn oscar(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscar"))
        .current_dir(dir)
        .env_remove("OSCAR_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn records(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn prox_examples() {
    let dir = TempDir::new().unwrap();
    write_vector(&dir.path().join("v.txt"), &[3.0, 2.9]).unwrap();
    let run = |prox: &str, l1: &str, l2: &str| {
        let out = oscar(
            dir.path(),
            &[
                "prox",
                "-i",
                "v.txt",
                "-o",
                "p.txt",
                "--prox",
                prox,
                "--lambda1",
                l1,
                "--lambda2",
                l2,
            ],
        );
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert_eq!(out.stdout.iter().filter(|&&b| b == b'\n').count(), 1);
        read_vector(&dir.path().join("p.txt")).unwrap()
    };
    let gpo = run("gpo", "0", "1");
    assert!((gpo[0] - 2.45).abs() < 1e-12 && (gpo[1] - 2.45).abs() < 1e-12);
    assert_eq!(run("apo", "0", "1"), vec![2.0, 2.9]);
    assert_eq!(run("gpo", "0", "0"), vec![3.0, 2.9]);
}

#[test]
fn prox_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.txt"), "1.0\n# comment\n2.x\n").unwrap();
    let out = oscar(dir.path(), &["prox", "-i", "bad.txt", "-o", "p.txt"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("bad.txt:3"), "{}", stderr(&out));
    assert!(!dir.path().join("p.txt").exists());

    write_vector(&dir.path().join("v.txt"), &[1.0]).unwrap();
    let out = oscar(
        dir.path(),
        &["prox", "-i", "v.txt", "-o", "p.txt", "--lambda2", "-0.5"],
    );
    assert_eq!(code(&out), 2);
    let out = oscar(dir.path(), &["prox", "-i", "missing.txt", "-o", "p.txt"]);
    assert_eq!(code(&out), 2);
    let out = oscar(dir.path(), &["prox", "--bogus"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_recovers_identity_system() {
    let dir = TempDir::new().unwrap();
    let y = [1.0, -2.0, 3.0, 0.5, -0.25, 4.0];
    write_vector(&dir.path().join("y.txt"), &y).unwrap();
    write_matrix(&dir.path().join("a.csv"), &DenseMatrix::identity(6)).unwrap();
    for solver in ["fista", "twist", "sparsa", "admm", "sbm", "padmm"] {
        let out = oscar(
            dir.path(),
            &[
                "solve",
                "-y",
                "y.txt",
                "-a",
                "a.csv",
                "--lambda1",
                "0",
                "--lambda2",
                "0",
                "--tol",
                "1e-12",
                "--max-iter",
                "5000",
                "--solver",
                solver,
                "-o",
                "x.txt",
                "--trace",
                "trace.csv",
            ],
        );
        assert_eq!(code(&out), 0, "{solver}: {}", stderr(&out));
        let x = read_vector(&dir.path().join("x.txt")).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() <= 1e-6, "{solver}: {a} vs {b}");
        }
        let summary = String::from_utf8(out.stdout).unwrap();
        let iterations: usize = summary
            .split_whitespace()
            .find_map(|kv| kv.strip_prefix("iterations="))
            .unwrap()
            .parse()
            .unwrap();
        assert!(summary.contains("objective="));
        let (header, rows) = records(&dir.path().join("trace.csv"));
        assert_eq!(header, TRACE_HEADER);
        assert_eq!(rows.len(), iterations + 1);
        // no ground truth, so the metric columns stay empty
        assert!(rows.iter().all(|r| r[3].is_empty() && r[4].is_empty()));
    }
}

#[test]
fn solve_generated_instance_with_truth_and_json() {
    let dir = TempDir::new().unwrap();
    let out = oscar(
        dir.path(),
        &[
            "solve", "--n", "200", "--seed", "4", "--solver", "fista", "-o", "x.txt", "--trace",
            "t.csv", "--json",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(String::from_utf8(out.stdout).unwrap().contains("mae="));
    assert_eq!(read_vector(&dir.path().join("x.txt")).unwrap().len(), 200);
    let (_, rows) = records(&dir.path().join("t.csv"));
    assert!(rows
        .iter()
        .all(|r| r[3].parse::<f64>().unwrap().is_finite()));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), rows.len());
    assert!(dir.path().join("x.json").exists());
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    write_vector(&dir.path().join("y.txt"), &[1.0, 2.0, 3.0]).unwrap();
    write_matrix(&dir.path().join("a.csv"), &DenseMatrix::identity(4)).unwrap();
    let out = oscar(
        dir.path(),
        &["solve", "-y", "y.txt", "-a", "a.csv", "-o", "x.txt"],
    );
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(!dir.path().join("x.txt").exists());

    let out = oscar(
        dir.path(),
        &[
            "solve",
            "--n",
            "200",
            "--max-iter",
            "2",
            "--tol",
            "1e-12",
            "-o",
            "x.txt",
        ],
    );
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("converged=false"));
    assert_eq!(read_vector(&dir.path().join("x.txt")).unwrap().len(), 200);

    let out = oscar(dir.path(), &["solve", "-y", "y.txt", "-o", "x.txt"]);
    assert_eq!(code(&out), 2);
}

fn without_time(rows: &[Vec<String>], time_col: usize) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            let mut r = r.clone();
            r.remove(time_col);
            r
        })
        .collect()
}

#[test]
fn bench_grid_rows_traces_and_determinism() {
    let dir = TempDir::new().unwrap();
    let args = [
        "bench", "--n", "200", "--seed", "5", "--seeds", "2", "--json", "-o", "b.csv",
    ];
    let out = oscar(dir.path(), &args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = records(&dir.path().join("b.csv"));
    assert_eq!(header, BENCH_HEADER);
    assert_eq!(rows.len(), 24);

    let mut sorted = rows.clone();
    let order = |s: &str| {
        ["fista", "twist", "sparsa", "admm", "sbm", "padmm"]
            .iter()
            .position(|x| *x == s)
    };
    sorted.sort_by_key(|r| (r[2].parse::<u64>().unwrap(), order(&r[0]), r[1] != "gpo"));
    assert_eq!(sorted, rows);

    for seed in ["5", "6"] {
        for prox in ["gpo", "apo"] {
            let find = |s: &str| {
                rows.iter()
                    .find(|r| r[0] == s && r[1] == prox && r[2] == seed)
                    .unwrap()
            };
            let (admm, sbm) = (find("admm"), find("sbm"));
            assert_eq!(admm[4..], sbm[4..]);
        }
    }
    for r in &rows {
        for field in &r[3..] {
            assert!(field.parse::<f64>().unwrap().is_finite());
        }
        let trace = dir
            .path()
            .join("b_traces")
            .join(format!("{}_{}_seed{}.csv", r[0], r[1], r[2]));
        let (_, t) = records(&trace);
        assert_eq!(t.len(), r[4].parse::<usize>().unwrap() + 1);
    }
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 24);

    let again = oscar(
        dir.path(),
        &args[..args.len() - 2]
            .iter()
            .copied()
            .chain(["-o", "c.csv"])
            .collect::<Vec<_>>(),
    );
    assert_eq!(code(&again), 0);
    let (_, rows2) = records(&dir.path().join("c.csv"));
    assert_eq!(without_time(&rows, 3), without_time(&rows2, 3));
}

#[test]
fn bench_subset_and_out_dir_override() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_oscar"))
        .current_dir(dir.path())
        .env("OSCAR_OUT_DIR", dir.path().join("results"))
        .args([
            "bench",
            "--n",
            "100",
            "--seeds",
            "1",
            "--solver",
            "fista,padmm",
            "--prox",
            "apo",
            "--no-traces",
            "-o",
            "sub.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (_, rows) = records(&dir.path().join("results/sub.csv"));
    assert_eq!(rows.len(), 2);
    assert!(!dir.path().join("results/sub_traces").exists());
    assert_eq!(code(&oscar(dir.path(), &["bench", "--seeds", "0"])), 2);
}

#[test]
fn prox_bench_table() {
    let dir = TempDir::new().unwrap();
    let out = oscar(
        dir.path(),
        &["prox-bench", "--k-max", "3", "-o", "pb.csv", "--json"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = records(&dir.path().join("pb.csv"));
    assert_eq!(header, PROX_BENCH_HEADER);
    let ns: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(ns, ["200", "400", "800"]);
    assert!(dir.path().join("pb.json").exists());
    assert_eq!(
        code(&oscar(dir.path(), &["prox-bench", "--k-max", "13"])),
        2
    );
    assert_eq!(code(&oscar(dir.path(), &["prox-bench", "--k-min", "0"])), 2);
}

#[test]
fn sweep_rows_and_guards() {
    let dir = TempDir::new().unwrap();
    let out = oscar(dir.path(), &["sweep", "--n", "100,200", "-o", "s.csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = records(&dir.path().join("s.csv"));
    assert_eq!(header, SWEEP_HEADER);
    assert_eq!(rows.len(), 24);
    assert!(rows[..12].iter().all(|r| r[0] == "100"));

    assert_eq!(code(&oscar(dir.path(), &["sweep", "--n", "50"])), 2);
    let out = oscar(
        dir.path(),
        &["sweep", "--n", "1000", "--max-bytes", "1000000"],
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("budget"));
}
