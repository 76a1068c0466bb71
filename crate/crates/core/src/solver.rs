//! One entry point over all exact solvers.

use std::fmt;
use std::str::FromStr;

use crate::branch::{solve_edges_only_counted, solve_xp, BranchStats, SolveOptions};
use crate::error::{Error, Result};
use crate::fixed_order::{fixed_order_assign_with_stats, fixed_order_min_pages};
use crate::instance::Instance;
use crate::layout::{PageAssignment, QueueLayout};
use crate::oracle::{solve_brute_force_counted, ExhaustPolicy, OracleBudget, OracleOutcome};
use crate::twosat::solve_fpt_kappa_ell;
use crate::two_vertex::solve_two_vertices;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Auto,
    Oracle,
    EdgesFpt,
    Xp,
    KappaEllFpt,
    TwoVertex,
    FixedOrder,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Auto,
        Algorithm::Oracle,
        Algorithm::EdgesFpt,
        Algorithm::Xp,
        Algorithm::KappaEllFpt,
        Algorithm::TwoVertex,
        Algorithm::FixedOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Oracle => "oracle",
            Algorithm::EdgesFpt => "edges-fpt",
            Algorithm::Xp => "xp",
            Algorithm::KappaEllFpt => "kappa-ell-fpt",
            Algorithm::TwoVertex => "two-vertex",
            Algorithm::FixedOrder => "fixed-order",
        }
    }

    /// Whether the solver accepts instances whose H has parallel edges.
    pub fn handles_multigraphs(self) -> bool {
        matches!(
            self,
            Algorithm::Auto | Algorithm::Oracle | Algorithm::KappaEllFpt | Algorithm::Xp
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown algorithm `{s}`")))
    }
}

/// Estimated leaves above which `auto` prefers the placement search.
pub const DEFAULT_FPT_THRESHOLD: f64 = 1e7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub options: SolveOptions,
    pub budget: OracleBudget,
    pub fpt_threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            options: SolveOptions::default(),
            budget: OracleBudget::default(),
            fpt_threshold: DEFAULT_FPT_THRESHOLD,
        }
    }
}

/// `ell^m_add · n_add! · m_add^n_add`, the leaf bound of the 2-SAT search.
pub fn kappa_ell_estimate(inst: &Instance) -> f64 {
    let (ell, m, n) = (inst.ell() as f64, inst.m_add() as f64, inst.n_add());
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    ell.powf(m) * factorial * m.powi(n as i32)
}

/// The solver `auto` runs on `inst`.
pub fn resolve_auto(inst: &Instance, threshold: f64) -> Algorithm {
    let fpt_or_xp = if kappa_ell_estimate(inst) <= threshold {
        Algorithm::KappaEllFpt
    } else {
        Algorithm::Xp
    };
    if inst.is_multigraph() {
        fpt_or_xp
    } else if inst.n_add() == 0 && inst.old_edge_count() == 0 {
        Algorithm::FixedOrder
    } else if inst.n_add() == 0 {
        Algorithm::EdgesFpt
    } else if inst.n_add() == 2 {
        Algorithm::TwoVertex
    } else {
        fpt_or_xp
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Solved(QueueLayout),
    Unsolvable,
    /// Only the oracle stops early.
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    /// The solver that actually ran.
    pub algorithm: Algorithm,
    pub verdict: Verdict,
    pub stats: BranchStats,
}

impl SolveReport {
    pub fn layout(&self) -> Option<&QueueLayout> {
        match &self.verdict {
            Verdict::Solved(l) => Some(l),
            _ => None,
        }
    }

    /// `Some(solvable)` for a definitive answer.
    pub fn definitive(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Solved(_) => Some(true),
            Verdict::Unsolvable => Some(false),
            Verdict::BudgetExhausted => None,
        }
    }
}

/// Runs `algorithm` on `inst`. A solver that does not apply to the instance
/// yields `Error::Precondition`.
pub fn solve(inst: &Instance, algorithm: Algorithm, config: &SolverConfig) -> Result<SolveReport> {
    let algorithm = match algorithm {
        Algorithm::Auto => resolve_auto(inst, config.fpt_threshold),
        a => a,
    };
    if inst.is_multigraph() && !algorithm.handles_multigraphs() {
        return Err(Error::Precondition(format!(
            "{algorithm} needs a simple graph; H has parallel edges"
        )));
    }
    let from_search = |r: crate::branch::SearchResult| {
        let verdict = match r.layout {
            Some(l) => Verdict::Solved(l),
            None => Verdict::Unsolvable,
        };
        (verdict, r.stats)
    };
    let (verdict, stats) = match algorithm {
        Algorithm::Auto => unreachable!("resolved above"),
        Algorithm::Oracle => {
            let budget = OracleBudget {
                on_exhaust: ExhaustPolicy::ReportUnknown,
                ..config.budget
            };
            let (outcome, used) = solve_brute_force_counted(inst, &budget)?;
            let verdict = match outcome {
                OracleOutcome::Solved(l) => Verdict::Solved(l),
                OracleOutcome::Unsolvable => Verdict::Unsolvable,
                OracleOutcome::BudgetExhausted => Verdict::BudgetExhausted,
            };
            let stats = BranchStats {
                explored: used,
                solutions_found: matches!(verdict, Verdict::Solved(_)) as u64,
                ..BranchStats::default()
            };
            (verdict, stats)
        }
        Algorithm::EdgesFpt => {
            require_no_new_vertices(inst, algorithm)?;
            from_search(solve_edges_only_counted(inst, &inst.layout_h().spine, config.options.prune)?)
        }
        Algorithm::Xp => from_search(solve_xp(inst, &config.options)?),
        Algorithm::KappaEllFpt => from_search(solve_fpt_kappa_ell(inst, &config.options)?),
        Algorithm::TwoVertex => from_search(solve_two_vertices(inst, &config.options)?),
        Algorithm::FixedOrder => {
            require_no_new_vertices(inst, algorithm)?;
            solve_fixed_order(inst)?
        }
    };
    Ok(SolveReport {
        algorithm,
        verdict,
        stats,
    })
}

fn require_no_new_vertices(inst: &Instance, algorithm: Algorithm) -> Result<()> {
    if inst.n_add() == 0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{algorithm} needs every vertex already on the spine, found {} new",
            inst.n_add()
        )))
    }
}

/// With nothing pre-assigned the minimum page count decides directly;
/// otherwise H's pages are extended by exact search.
fn solve_fixed_order(inst: &Instance) -> Result<(Verdict, BranchStats)> {
    let spine = &inst.layout_h().spine;
    let mut stats = BranchStats {
        explored: 1,
        ..BranchStats::default()
    };
    let layout = if inst.old_edge_count() == 0 {
        let (count, witness) = fixed_order_min_pages(inst.g(), spine)?;
        (count <= inst.ell())
            .then(|| PageAssignment::new(witness.assignment.pages().to_vec(), inst.ell()))
            .transpose()?
            .map(|a| QueueLayout::new(spine.clone(), a))
    } else {
        let mut precolored = vec![None; inst.g().edge_count()];
        for (id, &p) in inst.layout_h().assignment.pages().iter().enumerate() {
            precolored[id] = Some(p);
        }
        let (found, nodes) = fixed_order_assign_with_stats(inst.g(), spine, inst.ell(), &precolored)?;
        stats.explored = nodes.max(1);
        found
    };
    let verdict = match layout {
        Some(l) => {
            stats.solutions_found = 1;
            Verdict::Solved(inst.certify(l, "fixed-order search")?)
        }
        None => {
            stats.pruned = 1;
            Verdict::Unsolvable
        }
    };
    Ok((verdict, stats))
}
