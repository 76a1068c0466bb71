use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use qlext_cli::{run, run_bench, BenchSolver, CoreSolver};
use qlext_core::io::InstanceFile;
use qlext_core::{Algorithm, BranchStats, Error, Instance, SolveReport, SolverConfig, Verdict};
use tempfile::TempDir;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qlext(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("qlext").chain(args.iter().copied()), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

const SINGLE_EDGE: &str = r#"{
  "ell": 1,
  "vertices_g": ["a", "b"],
  "edges_g": [["a", "b"]],
  "vertices_h": ["a", "b"],
  "edges_h": [["a", "b"]],
  "pages_h": [1]
}"#;

// Two new edges over four fresh vertices, a single page.
const CROSSING_PAIR: &str = r#"{
  "ell": 1,
  "vertices_g": ["a", "b", "c", "d"],
  "edges_g": [["a", "d"], ["b", "c"]],
  "vertices_h": [],
  "edges_h": [],
  "pages_h": []
}"#;

const ONE_NEW_VERTEX: &str = r#"{
  "ell": 2,
  "vertices_g": ["a", "b", "c"],
  "edges_g": [["a", "b"], ["b", "c"]],
  "vertices_h": ["a", "b"],
  "edges_h": [["a", "b"]],
  "pages_h": [1]
}"#;

fn mcc(dir: &Path, edges: &str, coloring: &str, simple: bool) -> Output {
    let e = write(dir, "edges.txt", edges);
    let c = write(dir, "coloring.txt", coloring);
    let mut args = vec!["gen", "mcc", s(&e), "--coloring", s(&c)];
    if simple {
        args.push("--simple");
    }
    qlext(&args)
}

const TRIANGLE: &str = "a b\nb c\n# closing edge\na c\n";
const TRIANGLE_COLORS: &str = "a 1\nb 2\nc 3\n";

#[test]
fn validate_accepts_a_well_formed_instance() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "i.json", SINGLE_EDGE);
    let out = qlext(&["validate", s(&inst)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("instance: valid"), "{}", out.stdout);
}

#[test]
fn validate_reports_nesting_pairs_of_a_solution() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "i.json", CROSSING_PAIR);
    let sol = write(
        dir.path(),
        "s.json",
        r#"{"spine": ["a", "b", "c", "d"], "pages": {"a--d": 1, "b--c": 1}, "algorithm": "manual",
            "stats": {"explored": 0, "pruned": 0, "solutions_found": 0}}"#,
    );
    let out = qlext(&["validate", s(&inst), s(&sol)]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("a--d nests with b--c"), "{}", out.stdout);

    let fixed = write(
        dir.path(),
        "t.json",
        r#"{"spine": ["a", "b", "d", "c"], "pages": {"a--d": 1, "b--c": 1}, "algorithm": "manual",
            "stats": {"explored": 0, "pruned": 0, "solutions_found": 0}}"#,
    );
    let out = qlext(&["validate", s(&inst), s(&fixed)]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("solution: valid extension"));
}

#[test]
fn validate_rejects_malformed_json() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "i.json", "{\"ell\": 1,");
    let out = qlext(&["validate", s(&inst)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("error"), "{}", out.stderr);

    let wrong_key = write(dir.path(), "j.json", &SINGLE_EDGE.replace("\"ell\": 1", "\"ell\": \"one\""));
    let out = qlext(&["validate", s(&wrong_key)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("`ell`"), "{}", out.stderr);
}

#[test]
fn validate_flags_a_nesting_partial_layout() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"ell": 1, "vertices_g": ["a", "b", "c", "d"], "edges_g": [["a", "d"], ["b", "c"]],
        "vertices_h": ["a", "b", "c", "d"], "edges_h": [["a", "d"], ["b", "c"]], "pages_h": [1, 1]}"#;
    let inst = write(dir.path(), "i.json", text);
    let out = qlext(&["validate", s(&inst)]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("nests with"), "{}", out.stdout);
}

#[test]
fn every_applicable_algorithm_solves_the_trivial_instance() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "i.json", SINGLE_EDGE);
    for algo in Algorithm::ALL {
        let sol = dir.path().join(format!("{algo}.json"));
        let out = qlext(&["solve", s(&inst), "--algo", algo.name(), "--out", s(&sol)]);
        if algo == Algorithm::TwoVertex {
            assert_eq!(out.code, 2, "{}", out.stderr);
            continue;
        }
        assert_eq!(out.code, 0, "{algo}: {}", out.stderr);
        let check = qlext(&["validate", s(&inst), s(&sol)]);
        assert_eq!(check.code, 0, "{algo}: {}", check.stdout);
    }
}

#[test]
fn solve_writes_to_stdout_without_out() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "i.json", CROSSING_PAIR);
    let out = qlext(&["solve", s(&inst), "--no-timing"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("\"spine\""));
    assert!(!out.stdout.contains("wall_ms"));
}

#[test]
fn mismatched_algorithm_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "i.json", ONE_NEW_VERTEX);
    let out = qlext(&["solve", s(&inst), "--algo", "two-vertex"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("precondition"), "{}", out.stderr);
    assert_eq!(qlext(&["solve", s(&inst), "--algo", "edges-fpt"]).code, 2);
    assert_eq!(qlext(&["solve", s(&inst), "--algo", "kappa-ell-fpt", "--no-timing"]).code, 0);
}

#[test]
fn colored_graph_without_a_clique_is_unsolvable() {
    let dir = TempDir::new().unwrap();
    let gen = mcc(dir.path(), "a c\n", "a 1\nb 1\nc 2\nd 3\n", false);
    assert_eq!(gen.code, 0, "{}", gen.stderr);
    let inst = write(dir.path(), "i.json", &gen.stdout);
    for algo in ["auto", "xp", "oracle"] {
        let out = qlext(&["solve", s(&inst), "--algo", algo]);
        assert_eq!(out.code, 1, "{algo}: {}", out.stderr);
        assert!(out.stderr.contains("unsolvable"));
    }
}

#[test]
fn exhausted_budget_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let gen = mcc(dir.path(), TRIANGLE, TRIANGLE_COLORS, false);
    let inst = write(dir.path(), "i.json", &gen.stdout);
    let out = qlext(&["solve", s(&inst), "--algo", "oracle", "--budget", "1"]);
    assert_eq!(out.code, 3, "{}", out.stderr);
    assert!(out.stderr.contains("budget"));
    assert_eq!(qlext(&["solve", s(&inst), "--budget", "0"]).code, 2);
}

#[test]
fn random_generation_is_reproducible() {
    let first = qlext(&["gen", "random", "--seed", "7"]);
    let second = qlext(&["gen", "random", "--seed", "7"]);
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert_eq!(first.stdout, second.stdout);
    let file = InstanceFile::from_json(&first.stdout).unwrap();
    file.to_instance().unwrap();
    let meta = file.meta.unwrap();
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["known_solvable"], true);
    assert_ne!(qlext(&["gen", "random", "--seed", "8"]).stdout, first.stdout);
}

#[test]
fn triangle_reduction_uses_four_pages() {
    let dir = TempDir::new().unwrap();
    let gen = mcc(dir.path(), TRIANGLE, TRIANGLE_COLORS, false);
    assert_eq!(gen.code, 0, "{}", gen.stderr);
    let file = InstanceFile::from_json(&gen.stdout).unwrap();
    assert_eq!(file.ell, 4);
    let meta = file.meta.as_ref().unwrap();
    assert_eq!(meta["k"], 3);
    assert_eq!(meta["pinning_page"], 4);
    assert_eq!(meta["edge_pages"]["a--b"], 1);

    let inst = write(dir.path(), "i.json", &gen.stdout);
    let sol = dir.path().join("s.json");
    let out = qlext(&["solve", s(&inst), "--algo", "xp", "--out", s(&sol)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(qlext(&["validate", s(&inst), s(&sol)]).code, 0);
}

#[test]
fn simple_reduction_has_no_parallel_edges() {
    let dir = TempDir::new().unwrap();
    let multi = InstanceFile::from_json(&mcc(dir.path(), TRIANGLE, TRIANGLE_COLORS, false).stdout).unwrap();
    let gen = mcc(dir.path(), TRIANGLE, TRIANGLE_COLORS, true);
    assert_eq!(gen.code, 0, "{}", gen.stderr);
    let simple = InstanceFile::from_json(&gen.stdout).unwrap();
    assert!(!simple.to_instance().unwrap().is_multigraph());
    assert!(multi.to_instance().unwrap().is_multigraph());
    assert_eq!(simple.ell, 4);
}

#[test]
fn bad_coloring_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    // a and b share a color yet are adjacent.
    assert_eq!(mcc(dir.path(), "a b\n", "a 1\nb 1\n", false).code, 2);
    assert_eq!(mcc(dir.path(), "a b\n", "a 1\nb 3\n", false).code, 2);
    assert_eq!(mcc(dir.path(), "a z\n", "a 1\nb 2\n", false).code, 2);
    assert_eq!(mcc(dir.path(), "a b\n", "a one\nb 2\n", false).code, 2);
}

#[test]
fn bench_on_an_empty_directory_prints_only_the_header() {
    let dir = TempDir::new().unwrap();
    let out = qlext(&["bench", s(dir.path())]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "instance,algo,result,branches,ms\n");
}

fn corpus(dir: &Path, count: u64) {
    for seed in 0..count {
        let vertices = (5 + seed % 4).to_string();
        let args = ["gen", "random", "--seed", &seed.to_string(), "--vertices", &vertices, "--pages", "2"];
        let mut args = args.to_vec();
        if seed % 2 == 1 {
            args.push("--scramble");
        }
        let out = qlext(&args);
        if out.code == 0 {
            write(dir, &format!("r{seed:03}.json"), &out.stdout);
        }
    }
    let gen = mcc(dir, "a b\n", "a 1\nb 2\nc 2\n", false);
    write(dir, "edge.json", &gen.stdout);
}

#[test]
fn bench_solvers_agree_with_the_oracle() {
    let dir = TempDir::new().unwrap();
    corpus(dir.path(), 24);
    let out = qlext(&[
        "bench",
        s(dir.path()),
        "--algos",
        "oracle,xp,kappa-ell-fpt,auto,two-vertex",
        "--jobs",
        "3",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let mut reader = csv::Reader::from_reader(out.stdout.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let instances = fs::read_dir(dir.path()).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json")).count();
    assert_eq!(rows.len(), instances * 5);
    assert!(rows.iter().any(|r| &r[2] == "solved"));
    assert!(rows.iter().all(|r| ["solved", "unsolvable", "not-applicable"].contains(&&r[2])));
    assert!(rows.iter().all(|r| !r[4].is_empty() || &r[2] == "not-applicable"));
}

#[test]
fn bench_output_does_not_depend_on_jobs() {
    let dir = TempDir::new().unwrap();
    corpus(dir.path(), 12);
    let runs: Vec<String> = ["1", "4"]
        .iter()
        .map(|jobs| qlext(&["bench", s(dir.path()), "--no-timing", "--jobs", jobs]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert!(runs[0].lines().count() > 1);
}

struct AlwaysUnsolvable;

impl BenchSolver for AlwaysUnsolvable {
    fn name(&self) -> String {
        "broken".into()
    }

    fn run(&self, _: &Instance) -> Result<SolveReport, Error> {
        Ok(SolveReport {
            algorithm: Algorithm::Oracle,
            verdict: Verdict::Unsolvable,
            stats: BranchStats::default(),
        })
    }
}

#[test]
fn bench_reports_a_disagreeing_solver() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "single.json", SINGLE_EDGE);
    let solvers: Vec<Box<dyn BenchSolver>> = vec![
        Box::new(CoreSolver::new(Algorithm::Oracle, SolverConfig::default())),
        Box::new(AlwaysUnsolvable),
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_bench(dir.path(), &solvers, 2, false, &mut out, &mut err).unwrap();
    assert_eq!(code, 4);
    let err = String::from_utf8(err).unwrap();
    assert!(err.contains("disagreement on single"), "{err}");
    assert_eq!(
        String::from_utf8(out).unwrap(),
        "instance,algo,result,branches,ms\nsingle,oracle,solved,1,\nsingle,broken,unsolvable,0,\n"
    );
}

#[test]
fn solutions_do_not_depend_on_jobs() {
    let dir = TempDir::new().unwrap();
    let gen = mcc(dir.path(), TRIANGLE, TRIANGLE_COLORS, false);
    let inst = write(dir.path(), "i.json", &gen.stdout);
    for algo in ["xp", "oracle", "auto"] {
        let runs: Vec<String> = ["1", "2", "8"]
            .iter()
            .map(|jobs| qlext(&["solve", s(&inst), "--algo", algo, "--no-timing", "--jobs", jobs]).stdout)
            .collect();
        assert_eq!(runs[0], runs[1], "{algo}");
        assert_eq!(runs[0], runs[2], "{algo}");
    }
}

#[test]
fn binary_exit_codes_reach_the_shell() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "i.json", SINGLE_EDGE);
    let bin = env!("CARGO_BIN_EXE_qlext");
    let ok = Command::new(bin).args(["validate", s(&inst)]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("instance: valid"));
    let usage = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
