use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qlext_core::{solve, Algorithm, Error, Instance, SolveReport, SolverConfig, Verdict};
use rayon::prelude::*;

use crate::{load_instance, EXIT_DISAGREE, EXIT_OK};

/// A solver the benchmark can run. Tests inject doubles through this.
pub trait BenchSolver: Sync {
    fn name(&self) -> String;
    fn run(&self, inst: &Instance) -> Result<SolveReport, Error>;
}

pub struct CoreSolver {
    algorithm: Algorithm,
    config: SolverConfig,
}

impl CoreSolver {
    pub fn new(algorithm: Algorithm, config: SolverConfig) -> Self {
        CoreSolver { algorithm, config }
    }
}

impl BenchSolver for CoreSolver {
    fn name(&self) -> String {
        self.algorithm.name().to_string()
    }

    fn run(&self, inst: &Instance) -> Result<SolveReport, Error> {
        solve(inst, self.algorithm, &self.config)
    }
}

struct Row {
    algo: String,
    result: &'static str,
    branches: Option<u64>,
    ms: f64,
    verdict: Option<bool>,
}

fn run_one(solver: &dyn BenchSolver, inst: &Instance) -> Row {
    let start = Instant::now();
    let outcome = solver.run(inst);
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let (result, branches, verdict) = match &outcome {
        Ok(r) => match r.verdict {
            Verdict::Solved(_) => ("solved", Some(r.stats.explored), Some(true)),
            Verdict::Unsolvable => ("unsolvable", Some(r.stats.explored), Some(false)),
            Verdict::BudgetExhausted => ("budget", Some(r.stats.explored), None),
        },
        Err(Error::Precondition(_)) => ("not-applicable", None, None),
        Err(_) => ("error", None, None),
    };
    Row {
        algo: solver.name(),
        result,
        branches,
        ms,
        verdict,
    }
}

fn instance_paths(dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Runs every solver on every `*.json` file of `dir` and writes one CSV row
/// per pair, ordered by instance id (the file stem). Stops with exit code 4
/// after the first instance on which two definitive answers differ.
pub fn run_bench(
    dir: &Path,
    solvers: &[Box<dyn BenchSolver>],
    jobs: usize,
    timing: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, Error> {
    let paths = instance_paths(dir)?;
    let instances = paths
        .iter()
        .map(|p| {
            let id = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            load_instance(p).map(|(_, inst)| (id, inst))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let results: Vec<Vec<Row>> = pool.install(|| {
        instances
            .par_iter()
            .map(|(_, inst)| solvers.iter().map(|s| run_one(s.as_ref(), inst)).collect())
            .collect()
    });
    let io = |e: csv::Error| Error::Invalid(format!("writing CSV: {e}"));
    let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(stdout);
    csv.write_record(["instance", "algo", "result", "branches", "ms"]).map_err(io)?;
    for ((id, _), rows) in instances.iter().zip(&results) {
        for row in rows {
            let branches = row.branches.map(|b| b.to_string()).unwrap_or_default();
            let ms = if timing { format!("{:.3}", row.ms) } else { String::new() };
            csv.write_record([id.as_str(), &row.algo, row.result, &branches, &ms]).map_err(io)?;
        }
        let answers: Vec<(&str, bool)> = rows.iter().filter_map(|r| r.verdict.map(|v| (r.algo.as_str(), v))).collect();
        if let Some(&(first, v)) = answers.first() {
            if let Some(&(other, _)) = answers.iter().find(|&&(_, w)| w != v) {
                csv.flush().map_err(|e| Error::Invalid(e.to_string()))?;
                writeln!(stderr, "disagreement on {id}: {first} and {other} differ").ok();
                return Ok(EXIT_DISAGREE);
            }
        }
    }
    csv.flush().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(EXIT_OK)
}
