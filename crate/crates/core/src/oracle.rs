//! Exhaustive reference solvers for small instances.

use crate::branch::enumerate_placements;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::instance::Instance;
use crate::layout::{spans_nest, Page, PageAssignment, QueueLayout, SpineOrder};
use crate::twosat::EndpointOrder;

/// What to do when the branch budget runs out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExhaustPolicy {
    /// Return `Error::BudgetExhausted`.
    #[default]
    Fail,
    /// Return `OracleOutcome::BudgetExhausted`.
    ReportUnknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_branches: u64,
    pub on_exhaust: ExhaustPolicy,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_branches: 100_000_000,
            on_exhaust: ExhaustPolicy::Fail,
        }
    }
}

impl OracleBudget {
    pub fn new(max_branches: u64, on_exhaust: ExhaustPolicy) -> Result<Self> {
        if max_branches == 0 {
            return Err(Error::Invalid("branch budget must be at least 1".into()));
        }
        Ok(OracleBudget {
            max_branches,
            on_exhaust,
        })
    }
}

#[derive(Clone, Debug)]
pub enum OracleOutcome {
    Solved(QueueLayout),
    Unsolvable,
    BudgetExhausted,
}

impl OracleOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, OracleOutcome::Solved(_))
    }

    pub fn layout(&self) -> Option<&QueueLayout> {
        match self {
            OracleOutcome::Solved(l) => Some(l),
            _ => None,
        }
    }
}

struct Steps {
    used: u64,
    limit: u64,
}

impl Steps {
    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }
}

/// Every placement in enumeration order, and under each every page
/// assignment of E_add in lexicographic order; returns the first valid
/// extension. Each visited page-assignment node costs one branch.
pub fn solve_brute_force(inst: &Instance, budget: &OracleBudget) -> Result<OracleOutcome> {
    Ok(solve_brute_force_counted(inst, budget)?.0)
}

/// [`solve_brute_force`] plus the number of branches spent.
pub fn solve_brute_force_counted(inst: &Instance, budget: &OracleBudget) -> Result<(OracleOutcome, u64)> {
    let mut steps = Steps {
        used: 0,
        limit: budget.max_branches,
    };
    for placement in enumerate_placements(inst) {
        let spine = placement.spine(inst);
        match pages_for_spine(inst, &spine, &mut steps) {
            Some(Some(pages)) => {
                let layout = inst.layout_with(spine, &pages)?;
                return Ok((OracleOutcome::Solved(inst.certify(layout, "oracle")?), steps.used));
            }
            Some(None) => {}
            None => return Ok((exhausted(budget)?, budget.max_branches)),
        }
    }
    Ok((OracleOutcome::Unsolvable, steps.used))
}

fn exhausted(budget: &OracleBudget) -> Result<OracleOutcome> {
    match budget.on_exhaust {
        ExhaustPolicy::Fail => Err(Error::BudgetExhausted(budget.max_branches)),
        ExhaustPolicy::ReportUnknown => Ok(OracleOutcome::BudgetExhausted),
    }
}

/// Exhaustive page search for the new edges under a fixed full spine.
pub fn brute_force_pages(
    inst: &Instance,
    spine: &SpineOrder,
    budget: &OracleBudget,
) -> Result<Option<Vec<Page>>> {
    inst.require_full_spine(spine)?;
    let mut steps = Steps {
        used: 0,
        limit: budget.max_branches,
    };
    match pages_for_spine(inst, spine, &mut steps) {
        Some(found) => Ok(found),
        None => Err(Error::BudgetExhausted(budget.max_branches)),
    }
}

/// `None` when the budget ran out.
fn pages_for_spine(inst: &Instance, spine: &SpineOrder, steps: &mut Steps) -> Option<Option<Vec<Page>>> {
    let old: Vec<((usize, usize), Page)> = inst
        .old_edges()
        .map(|(e, p)| (spine.span_unchecked(e), p))
        .collect();
    let new: Vec<(usize, usize)> = inst
        .new_edge_ids()
        .map(|id| spine.span_unchecked(inst.g().edge(id)))
        .collect();
    let mut pages = Vec::with_capacity(new.len());
    let found = page_dfs(&old, &new, inst.ell(), &mut pages, steps)?;
    Some(found.then_some(pages))
}

fn page_dfs(
    old: &[((usize, usize), Page)],
    new: &[(usize, usize)],
    ell: usize,
    pages: &mut Vec<Page>,
    steps: &mut Steps,
) -> Option<bool> {
    if !steps.tick() {
        return None;
    }
    let i = pages.len();
    if i == new.len() {
        return Some(true);
    }
    for p in 0..ell {
        let clash = old.iter().any(|&(s, q)| q == p && spans_nest(new[i], s))
            || (0..i).any(|j| pages[j] == p && spans_nest(new[i], new[j]));
        if clash {
            continue;
        }
        pages.push(p);
        if page_dfs(old, new, ell, pages, steps)? {
            return Some(true);
        }
        pages.pop();
    }
    Some(false)
}

/// Smallest page count admitting a valid assignment of `g` on `spine`,
/// found by trying 0, 1, 2, ... pages.
pub fn min_pages_brute_force(g: &Graph, spine: &SpineOrder) -> Result<usize> {
    let spans: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&e| {
            spine
                .span(e)
                .ok_or_else(|| Error::Structure("spine misses an endpoint".into()))
        })
        .collect::<Result<_>>()?;
    if spans.is_empty() {
        return Ok(0);
    }
    for ell in 1..=spans.len() {
        let mut steps = Steps {
            used: 0,
            limit: u64::MAX,
        };
        let mut pages = Vec::new();
        if page_dfs(&[], &spans, ell, &mut pages, &mut steps) == Some(true) {
            return Ok(ell);
        }
    }
    unreachable!("one page per edge always works")
}

/// Whether some spine extending H realises the full page assignment `sigma`
/// while ordering the vertices of `eo` as listed. Exhaustive over placements.
pub fn solve_constrained(inst: &Instance, sigma: &PageAssignment, eo: &EndpointOrder) -> Result<Option<QueueLayout>> {
    if sigma.len() != inst.g().edge_count() || sigma.page_count() != inst.ell() {
        return Err(Error::Invalid("page assignment does not fit the instance".into()));
    }
    let respects = |spine: &SpineOrder| {
        eo.order()
            .windows(2)
            .all(|w: &[VertexId]| spine.rank(w[0]) < spine.rank(w[1]))
    };
    for placement in enumerate_placements(inst) {
        let spine = placement.spine(inst);
        if !respects(&spine) {
            continue;
        }
        let layout = QueueLayout::new(spine, sigma.clone());
        if inst.is_solution(&layout)? {
            return Ok(Some(layout));
        }
    }
    Ok(None)
}
