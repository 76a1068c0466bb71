//! `qlext`: validate, solve, generate and benchmark queue layout extension
//! instances.
//!
//! Exit codes: 0 solved or valid, 1 unsolvable or invalid, 2 usage or
//! parse error, 3 budget exhausted, 4 solvers disagree (or a solver
//! reported an internal inconsistency).

mod bench;
mod gen;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlext_core::io::{describe_violations, InstanceFile, SolutionFile, SolutionStats};
use qlext_core::oracle::{ExhaustPolicy, OracleBudget};
use qlext_core::{solve, Algorithm, Error, Instance, PruneMode, SolveOptions, SolverConfig, Verdict};

pub use bench::{run_bench, BenchSolver, CoreSolver};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qlext", version, about = "Queue layout extension solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an instance file and, optionally, a solution for it.
    Validate {
        instance: PathBuf,
        solution: Option<PathBuf>,
    },
    /// Decide an instance and write a solution file on success.
    Solve(SolveArgs),
    /// Print a generated instance file.
    #[command(subcommand)]
    Gen(gen::GenCommand),
    /// Run solvers over every `*.json` instance in a directory; CSV on stdout.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgoArg {
    Auto,
    Oracle,
    EdgesFpt,
    Xp,
    KappaEllFpt,
    TwoVertex,
    FixedOrder,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Auto => Algorithm::Auto,
            AlgoArg::Oracle => Algorithm::Oracle,
            AlgoArg::EdgesFpt => Algorithm::EdgesFpt,
            AlgoArg::Xp => Algorithm::Xp,
            AlgoArg::KappaEllFpt => Algorithm::KappaEllFpt,
            AlgoArg::TwoVertex => Algorithm::TwoVertex,
            AlgoArg::FixedOrder => Algorithm::FixedOrder,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PruneArg {
    Original,
    Iterative,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "QLEXT_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Branch budget of the oracle.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Threshold rule for dropping flexible new edges.
    #[arg(long, value_enum, default_value_t = PruneArg::Original)]
    prune: PruneArg,
    /// Estimated placement-search branches above which `auto` switches to xp.
    #[arg(long, default_value_t = qlext_core::solver::DEFAULT_FPT_THRESHOLD)]
    fpt_threshold: f64,
}

impl SearchArgs {
    fn config(&self) -> Result<SolverConfig, Error> {
        Ok(SolverConfig {
            options: SolveOptions {
                jobs: self.jobs.max(1),
                prune: match self.prune {
                    PruneArg::Original => PruneMode::Original,
                    PruneArg::Iterative => PruneMode::Iterative,
                },
            },
            budget: OracleBudget::new(self.budget, ExhaustPolicy::ReportUnknown)?,
            fpt_threshold: self.fpt_threshold,
        })
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgoArg::Auto)]
    algo: AlgoArg,
    /// Solution file path; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the wall time out of the solution file.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    dir: PathBuf,
    /// Comma-separated solvers.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![AlgoArg::Oracle, AlgoArg::Xp, AlgoArg::KappaEllFpt])]
    algos: Vec<AlgoArg>,
    /// Write an empty `ms` column.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    search: SearchArgs,
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate { instance, solution } => cmd_validate(&instance, solution.as_deref(), stdout),
        Command::Solve(args) => cmd_solve(&args, stdout, stderr),
        Command::Gen(cmd) => gen::cmd_gen(&cmd, stdout),
        Command::Bench(args) => cmd_bench(&args, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidLayout(_) => EXIT_NO,
        Error::BudgetExhausted(_) => EXIT_BUDGET,
        Error::Internal(_) => EXIT_DISAGREE,
        _ => EXIT_USAGE,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn load_instance(path: &Path) -> Result<(InstanceFile, Instance), Error> {
    let file = InstanceFile::from_json(&read(path)?)?;
    let inst = file.to_instance()?;
    Ok((file, inst))
}

fn cmd_validate(instance: &Path, solution: Option<&Path>, out: &mut dyn Write) -> Result<i32, Error> {
    let file = InstanceFile::from_json(&read(instance)?)?;
    let inst = match file.to_instance() {
        Ok(inst) => inst,
        Err(Error::InvalidLayout(report)) => {
            writeln!(out, "instance: layout of H is invalid").ok();
            for line in file.describe_h_violations(&report) {
                writeln!(out, "  {line}").ok();
            }
            return Ok(EXIT_NO);
        }
        Err(e) => return Err(e),
    };
    writeln!(
        out,
        "instance: valid (ell={}, |V(G)|={}, |E(G)|={}, n_add={}, m_add={})",
        inst.ell(),
        inst.g().vertex_count(),
        inst.g().edge_count(),
        inst.n_add(),
        inst.m_add()
    )
    .ok();
    let Some(path) = solution else { return Ok(EXIT_OK) };
    let sol = SolutionFile::from_json(&read(path)?)?;
    match sol.load_against(&inst) {
        Ok(_) => {
            writeln!(out, "solution: valid extension").ok();
            Ok(EXIT_OK)
        }
        Err(Error::InvalidLayout(report)) => {
            writeln!(out, "solution: {} nesting pair(s) on a shared page", report.violations.len()).ok();
            for line in describe_violations(&inst, &report) {
                writeln!(out, "  {line}").ok();
            }
            Ok(EXIT_NO)
        }
        Err(Error::Invalid(msg)) => {
            writeln!(out, "solution: {msg}").ok();
            Ok(EXIT_NO)
        }
        Err(e) => Err(e),
    }
}

fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Error> {
    let (_, inst) = load_instance(&args.instance)?;
    let config = args.search.config()?;
    let start = Instant::now();
    let report = solve(&inst, args.algo.into(), &config)?;
    let wall_ms = (!args.no_timing).then(|| start.elapsed().as_secs_f64() * 1e3);
    match &report.verdict {
        Verdict::Solved(layout) => {
            let file = SolutionFile::from_layout(&inst, layout, report.algorithm.name(), SolutionStats::new(report.stats, wall_ms));
            let text = file.to_json();
            match &args.out {
                Some(path) => fs::write(path, text)
                    .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?,
                None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Invalid(e.to_string()))?,
            }
            Ok(EXIT_OK)
        }
        Verdict::Unsolvable => {
            writeln!(
                stderr,
                "unsolvable ({}, {} branches explored)",
                report.algorithm, report.stats.explored
            )
            .ok();
            Ok(EXIT_NO)
        }
        Verdict::BudgetExhausted => {
            writeln!(stderr, "budget of {} branches exhausted", config.budget.max_branches).ok();
            Ok(EXIT_BUDGET)
        }
    }
}

fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Error> {
    let config = args.search.config()?;
    let solvers: Vec<Box<dyn BenchSolver>> = args
        .algos
        .iter()
        .map(|&a| Box::new(CoreSolver::new(a.into(), config)) as Box<dyn BenchSolver>)
        .collect();
    run_bench(&args.dir, &solvers, config.options.jobs, !args.no_timing, stdout, stderr)
}
