use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const P4: &str = "n 4\nB 1\ndefault_nonedge weight 1 cost 1\nedge 0 1 1\nedge 1 2 1\nedge 2 3 1\n";

fn bcmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcmd")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_p4_with_fpt() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p4.bcmd", P4);
    let out = bcmd(&["solve", "--input", s(&input), "--algo", "fpt"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("total_cost        1"), "{text}");
    assert!(text.contains("diameter          2"), "{text}");
    assert!(text.contains("added             {0,3}"), "{text}");

    let json = bcmd(&["solve", "--input", s(&input), "--report", "json", "--oracle"]);
    let value: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(value["diameter"], 2);
    assert_eq!(value["oracle_optimum"], 2);
    assert_eq!(value["ratio"], 1.0);
    assert!(value.get("timings_ms").is_none());
}

#[test]
fn solutions_from_every_algorithm_pass_check() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("r.bcmd");
    let gen = bcmd(&[
        "gen",
        "random",
        "--n",
        "8",
        "--p",
        "0.3",
        "--wmax",
        "5",
        "--cmax",
        "1",
        "--budget",
        "2",
        "--seed",
        "5",
        "--output",
        s(&input),
    ]);
    assert_eq!(gen.status.code(), Some(0));
    for algo in ["fpt", "pairs", "star", "mst", "exact"] {
        let sol = dir.path().join(format!("{algo}.sol"));
        let out = bcmd(&["solve", "--input", s(&input), "--algo", algo, "--solution", s(&sol)]);
        assert_eq!(out.status.code(), Some(0), "{algo}: {}", stderr(&out));
        let check = bcmd(&["check", "--input", s(&input), "--solution", s(&sol)]);
        if matches!(algo, "pairs" | "star") && check.status.code() == Some(1) {
            // bicriteria: only the budget may be violated
            let msg = stderr(&check);
            assert!(msg.contains("exceeds budget") && !msg.contains("claimed"), "{algo}: {msg}");
        } else {
            assert_eq!(check.status.code(), Some(0), "{algo}: {}", stderr(&check));
            assert!(stdout(&check).starts_with("ok: "));
        }
    }
}

#[test]
fn check_reports_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p4.bcmd", P4);
    let wrong = write(dir.path(), "wrong.sol", "add 0 3\ncost 1\ndiameter 1\n");
    let out = bcmd(&["check", "--input", s(&input), "--solution", s(&wrong)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("mismatch"), "{}", stderr(&out));
    assert!(stderr(&out).contains("augmented diameter is 2"));

    let edge = write(dir.path(), "edge.sol", "add 0 1\ncost 0\ndiameter 3\n");
    assert_eq!(bcmd(&["check", "--input", s(&input), "--solution", s(&edge)]).status.code(), Some(1));
    let over = write(dir.path(), "over.sol", "add 0 3\nadd 0 2\ncost 2\ndiameter 2\n");
    let out = bcmd(&["check", "--input", s(&input), "--solution", s(&over)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("exceeds budget"));
}

#[test]
fn invalid_input_and_guards_set_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.bcmd", "n 3\nB 1\nedge 0 7 1\n");
    let out = bcmd(&["solve", "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let mut path = String::from("n 10\nB 2\ndefault_nonedge weight 1 cost 1\n");
    for i in 1..10 {
        path.push_str(&format!("edge {} {i} 1\n", i - 1));
    }
    let big = write(dir.path(), "path10.bcmd", &path);
    assert_eq!(bcmd(&["exact", "--input", s(&big)]).status.code(), Some(2));
    assert_eq!(bcmd(&["solve", "--input", s(&big), "--algo", "exact"]).status.code(), Some(2));
    assert_eq!(bcmd(&["solve", "--input", s(&big), "--oracle"]).status.code(), Some(2));
    assert_eq!(bcmd(&["exact", "--input", s(&big), "--max-non-edges", "40"]).status.code(), Some(0));

    let sets = write(dir.path(), "sets.txt", "0 1\n");
    let out = bcmd(&["gen", "setcover", "--sets", s(&sets), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(bcmd(&["gen", "setcover", "--sets", s(&sets), "--k", "1", "--copies", "0"]).status.code(), Some(2));

    let weighted = write(dir.path(), "w.bcmd", "n 3\nB 1\ndefault_nonedge weight 1 cost 2\nedge 0 1 1\n");
    assert_eq!(bcmd(&["solve", "--input", s(&weighted), "--algo", "star"]).status.code(), Some(1));
    assert_eq!(bcmd(&["solve", "--input", s(&weighted), "--first", "5"]).status.code(), Some(1));
    assert_eq!(bcmd(&["solve", "--bogus"]).status.code(), Some(1));
    assert_eq!(bcmd(&["--help"]).status.code(), Some(0));
}

#[test]
fn apsp_and_cluster_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p4.bcmd", P4);
    let out = bcmd(&["apsp", "--input", s(&input), "--source", "0", "--beta", "1"]);
    assert_eq!(stdout(&out), "1 0 0 0\n1 0 1 1\n1 0 2 1\n1 0 3 1\n");
    let all = bcmd(&["apsp", "--input", s(&input)]);
    assert_eq!(stdout(&all).lines().count(), 32);
    assert_eq!(bcmd(&["apsp", "--input", s(&input), "--beta", "2"]).status.code(), Some(1));

    let out = bcmd(&["cluster", "--input", s(&input)]);
    assert_eq!(stdout(&out), "centers: 0 3\nradius: 1\ncluster 0 (center 0): 0 1\ncluster 1 (center 3): 2 3\n");
}

#[test]
fn generators_are_reproducible() {
    let args =
        ["gen", "random", "--n", "6", "--p", "0.5", "--wmax", "3", "--cmax", "2", "--budget", "2", "--seed", "42"];
    let a = bcmd(&args);
    assert_eq!(a.stdout, bcmd(&args).stdout);
    assert_eq!(stdout(&a), include_str!("golden/random_6_42.bcmd"));

    let dir = tempfile::tempdir().unwrap();
    let sets = write(dir.path(), "sets.txt", "0\n0 1\n");
    let g = bcmd(&["gen", "setcover", "--sets", s(&sets), "--k", "1"]);
    assert_eq!(g.status.code(), Some(0));
    assert!(stdout(&g).starts_with("n 9\nB 1\n"));
    let multi = bcmd(&["gen", "setcover", "--sets", s(&sets), "--k", "1", "--copies", "2"]);
    assert!(stdout(&multi).starts_with("n 15\nB 2\n"));
}

#[test]
fn bench_small_passes_its_bounds() {
    let out = bcmd(&["bench", "--suite", "small", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("violations: 0"));
    assert!(!text.contains("VIOLATION"));
    assert_eq!(out.stdout, bcmd(&["bench", "--suite", "small", "--seed", "7"]).stdout);
}
