//! Polynomial algorithm for instances whose missing part is two vertices
//! `u ≺ v` and their incident edges.
//!
//! For each placement and each page of `uv` the spine is fixed, and the new
//! edges at `u` and `v` are settled by three steps:
//! 1. an edge with a page no conflicting edge can use is set aside on it;
//! 2. edges `vx` with `u ≺ x` and edges `uy` with `y ≺ v` that have at least
//!    two admissible pages are set aside, to be re-inserted later;
//! 3. what remains either has one admissible page or never conflicts with
//!    another multi-page edge, so a greedy choice decides the branch.
//!
//! New edges between two old vertices are not covered by the algorithm
//! proper; their pages are branched on and they are then treated as old.

use crate::branch::{enumerate_placements, BranchStats, SearchResult, SolveOptions};
use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, VertexId};
use crate::instance::{AdmissiblePageTable, Instance};
use crate::layout::{spans_nest, Page, QueueLayout, SpineOrder};
use crate::parallel::first_success;

/// Outcome of the simple-case filter on a table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpleCaseOutcome {
    /// Rows set aside, each with the page it will finally take.
    pub removed: Vec<(usize, Page)>,
    /// Some row has no admissible page.
    pub infeasible: bool,
}

/// Sets aside every row `e` having a page in `P(e)` that no row of `⋈(e)`
/// admits; the smallest such page is recorded. Decided on the whole table
/// at once.
pub fn simple_case_filter(table: &AdmissiblePageTable) -> SimpleCaseOutcome {
    if (0..table.len()).any(|i| table.admissible(i).is_empty()) {
        return SimpleCaseOutcome {
            removed: Vec::new(),
            infeasible: true,
        };
    }
    let removed = (0..table.len())
        .filter_map(|i| {
            let mut own = table.admissible(i).clone();
            for &j in table.conflicts(i) {
                own = own.difference(table.admissible(j));
            }
            own.first().map(|p| (i, p))
        })
        .collect();
    SimpleCaseOutcome {
        removed,
        infeasible: false,
    }
}

/// Which reduction rule set an edge aside.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemovalRule {
    /// Edge `vx` with `u ≺ x`.
    Right,
    /// Edge `uy` with `y ≺ v`.
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Removal {
    pub row: usize,
    pub rule: RemovalRule,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub surviving: Vec<usize>,
    /// Removals in the order they were applied.
    pub log: Vec<Removal>,
}

/// The two new vertices in spine order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexPair {
    pub left: VertexId,
    pub right: VertexId,
}

impl VertexPair {
    /// The pair ordered by `spine`.
    pub fn on(spine: &SpineOrder, a: VertexId, b: VertexId) -> Self {
        if spine.rank(a) < spine.rank(b) {
            VertexPair { left: a, right: b }
        } else {
            VertexPair { left: b, right: a }
        }
    }

    /// Endpoint of `e` in the pair and the other endpoint.
    fn split(&self, e: Edge) -> (VertexId, VertexId) {
        if e.contains(self.left) {
            (self.left, e.other(self.left))
        } else {
            (self.right, e.other(self.right))
        }
    }
}

/// Applies the right rule to all of `rows`, then the left rule to what is
/// left. Every row must be an edge with exactly one endpoint in `pair`.
pub fn reduce_remove_safe(
    spine: &SpineOrder,
    pair: VertexPair,
    table: &AdmissiblePageTable,
    rows: &[usize],
) -> ReductionOutcome {
    let rank = |v: VertexId| spine.rank(v).expect("vertex on spine");
    let (u, v) = (rank(pair.left), rank(pair.right));
    let mut log = Vec::new();
    let mut surviving = Vec::new();
    let flexible = |r: usize| table.admissible(r).len() >= 2;
    let mut rest = Vec::new();
    for &r in rows {
        let (end, x) = pair.split(table.edge(r));
        if end == pair.right && u < rank(x) && flexible(r) {
            log.push(Removal {
                row: r,
                rule: RemovalRule::Right,
            });
        } else {
            rest.push(r);
        }
    }
    for r in rest {
        let (end, y) = pair.split(table.edge(r));
        if end == pair.left && rank(y) < v && flexible(r) {
            log.push(Removal {
                row: r,
                rule: RemovalRule::Left,
            });
        } else {
            surviving.push(r);
        }
    }
    ReductionOutcome { surviving, log }
}

/// Pages for the surviving rows: single-page rows take their page, every
/// other row the smallest admissible page not used by a conflicting
/// single-page row. `None` if that fails somewhere. Indexed by row.
pub fn assign_residual(table: &AdmissiblePageTable, surviving: &[usize]) -> Option<Vec<Option<Page>>> {
    let mut pages = vec![None; table.len()];
    let mut is_single = vec![false; table.len()];
    for &r in surviving {
        if table.admissible(r).len() == 1 {
            is_single[r] = true;
            pages[r] = table.admissible(r).first();
        }
    }
    for &r in surviving {
        if is_single[r] {
            if table.conflicts(r).iter().any(|&c| is_single[c] && pages[c] == pages[r]) {
                return None;
            }
            continue;
        }
        let mut open = table.admissible(r).clone();
        for &c in table.conflicts(r) {
            if let (true, Some(p)) = (is_single[c], pages[c]) {
                open.remove(p);
            }
        }
        pages[r] = Some(open.first()?);
    }
    Some(pages)
}

/// Re-inserts the logged rows in reverse order. A row with a page free of
/// conflicting assigned rows takes the smallest such page; otherwise its
/// conflicting rows on admissible pages are repainted along the chain
/// sorted by their far endpoint, which frees a page.
pub fn reinsert_removed(
    spine: &SpineOrder,
    pair: VertexPair,
    table: &AdmissiblePageTable,
    pages: &mut [Option<Page>],
    log: &[Removal],
) -> Result<()> {
    let rank = |v: VertexId| spine.rank(v).expect("vertex on spine");
    for removal in log.iter().rev() {
        let r = removal.row;
        let admissible = table.admissible(r);
        if let Some(p) = free_page(table, pages, r) {
            pages[r] = Some(p);
            continue;
        }
        let mut chain: Vec<usize> = table
            .conflicts(r)
            .iter()
            .copied()
            .filter(|&c| pages[c].is_some_and(|p| admissible.contains(p)))
            .collect();
        let far = |c: usize| rank(pair.split(table.edge(c)).1);
        match removal.rule {
            RemovalRule::Right => chain.sort_by_key(|&c| far(c)),
            RemovalRule::Left => chain.sort_by_key(|&c| std::cmp::Reverse(far(c))),
        }
        for i in (0..chain.len().saturating_sub(1)).rev() {
            let target = pages[chain[i + 1]];
            let (c, p) = (chain[i], target.expect("chain rows are assigned"));
            if !table.admissible(c).contains(p) {
                return Err(Error::Internal(format!(
                    "repainting would move edge row {c} to an inadmissible page"
                )));
            }
            pages[c] = Some(p);
        }
        match free_page(table, pages, r) {
            Some(p) => pages[r] = Some(p),
            None => {
                return Err(Error::Internal(
                    "re-inserting a set-aside edge found no free page".into(),
                ))
            }
        }
    }
    Ok(())
}

fn free_page(table: &AdmissiblePageTable, pages: &[Option<Page>], r: usize) -> Option<Page> {
    let mut open = table.admissible(r).clone();
    for &c in table.conflicts(r) {
        if let Some(p) = pages[c] {
            open.remove(p);
        }
    }
    open.first()
}

/// Triples breaking the admissible-page propagation property: for
/// `e1 = vx`, `e2 = uy`, `e3 = uz` with `u ≺ x ≺ y ≺ z` and `v ≺ y`,
/// `P(e1) ∩ P(e3) ⊆ P(e2)`, and its mirror image. Always empty when the
/// table was built with every edge of H counted as old.
pub fn propagation_violations(spine: &SpineOrder, pair: VertexPair, table: &AdmissiblePageTable) -> Vec<(usize, usize, usize)> {
    let rank = |v: VertexId| spine.rank(v).expect("vertex on spine");
    let (u, v) = (rank(pair.left), rank(pair.right));
    let rows: Vec<(bool, usize)> = (0..table.len())
        .map(|r| {
            let (end, x) = pair.split(table.edge(r));
            (end == pair.left, rank(x))
        })
        .collect();
    let mut out = Vec::new();
    for (i1, &(at_u1, x)) in rows.iter().enumerate() {
        for (i2, &(at_u2, y)) in rows.iter().enumerate() {
            for (i3, &(at_u3, z)) in rows.iter().enumerate() {
                let right = !at_u1 && at_u2 && at_u3 && u < x && x < y && y < z && v < y;
                let left = at_u1 && !at_u2 && !at_u3 && z < y && y < x && x < v && y < u;
                if right || left {
                    let shared = table.admissible(i1).intersection(table.admissible(i3));
                    if !shared.is_subset(table.admissible(i2)) {
                        out.push((i1, i2, i3));
                    }
                }
            }
        }
    }
    out
}

/// Decides an instance with exactly two new vertices. Branches are the
/// placements in enumeration order, then the page of `uv` (one branch if
/// absent), then the pages of new edges between old vertices.
pub fn solve_two_vertices(inst: &Instance, opts: &SolveOptions) -> Result<SearchResult> {
    if inst.n_add() != 2 {
        return Err(Error::Precondition(format!(
            "the two-vertex algorithm needs exactly two new vertices, found {}",
            inst.n_add()
        )));
    }
    let (a, b) = (inst.new_vertices()[0], inst.new_vertices()[1]);
    let mut uv = None;
    let mut fixed_ids = Vec::new();
    let mut incident_ids = Vec::new();
    for id in inst.new_edge_ids() {
        let e = inst.g().edge(id);
        if e.contains(a) && e.contains(b) {
            uv = Some(id);
        } else if e.contains(a) || e.contains(b) {
            incident_ids.push(id);
        } else {
            fixed_ids.push(id);
        }
    }
    let fixed_choices = fixed_page_choices(inst, &fixed_ids);
    let placements: Vec<_> = enumerate_placements(inst).collect();
    let ctx = BranchContext {
        inst,
        uv,
        fixed_ids: &fixed_ids,
        incident_ids: &incident_ids,
        fixed_choices: &fixed_choices,
    };
    let (found, mut stats) = first_success(placements.len(), opts.jobs, |i| {
        let mut st = BranchStats::default();
        let spine = placements[i].spine(inst);
        let hit = ctx.solve_spine(&spine, &mut st)?;
        Ok((hit, st))
    })?;
    let layout = match found {
        Some(l) => Some(inst.certify(l, "two-vertex algorithm")?),
        None => None,
    };
    stats.solutions_found = layout.is_some() as u64;
    Ok(SearchResult { layout, stats })
}

/// Page vectors for the new edges between old vertices that avoid nesting
/// with H and with each other, in lexicographic order.
fn fixed_page_choices(inst: &Instance, ids: &[EdgeId]) -> Vec<Vec<Page>> {
    let spine = &inst.layout_h().spine;
    let spans: Vec<(usize, usize)> = ids.iter().map(|&id| spine.span_unchecked(inst.g().edge(id))).collect();
    let old: Vec<((usize, usize), Page)> = inst.old_edges().map(|(e, p)| (spine.span_unchecked(e), p)).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(ids.len());
    fn extend(
        spans: &[(usize, usize)],
        old: &[((usize, usize), Page)],
        ell: usize,
        current: &mut Vec<Page>,
        out: &mut Vec<Vec<Page>>,
    ) {
        let i = current.len();
        if i == spans.len() {
            out.push(current.clone());
            return;
        }
        for p in 0..ell {
            let clash = old.iter().any(|&(s, q)| q == p && spans_nest(spans[i], s))
                || (0..i).any(|j| current[j] == p && spans_nest(spans[i], spans[j]));
            if !clash {
                current.push(p);
                extend(spans, old, ell, current, out);
                current.pop();
            }
        }
    }
    extend(&spans, &old, inst.ell(), &mut current, &mut out);
    out
}

struct BranchContext<'a> {
    inst: &'a Instance,
    uv: Option<EdgeId>,
    fixed_ids: &'a [EdgeId],
    incident_ids: &'a [EdgeId],
    fixed_choices: &'a [Vec<Page>],
}

impl BranchContext<'_> {
    fn solve_spine(&self, spine: &SpineOrder, stats: &mut BranchStats) -> Result<Option<QueueLayout>> {
        let inst = self.inst;
        let uv_pages: Vec<Option<Page>> = match self.uv {
            Some(_) => (0..inst.ell()).map(Some).collect(),
            None => vec![None],
        };
        for uv_page in uv_pages {
            if self.fixed_choices.is_empty() {
                stats.explored += 1;
                stats.pruned += 1;
            }
            for choice in self.fixed_choices {
                stats.explored += 1;
                match self.solve_branch(spine, uv_page, choice)? {
                    Some(layout) => return Ok(Some(layout)),
                    None => stats.pruned += 1,
                }
            }
        }
        Ok(None)
    }

    fn solve_branch(&self, spine: &SpineOrder, uv_page: Option<Page>, choice: &[Page]) -> Result<Option<QueueLayout>> {
        let inst = self.inst;
        let g = inst.g();
        let mut fixed: Vec<(Edge, Page)> = inst.old_edges().collect();
        fixed.extend(self.fixed_ids.iter().zip(choice).map(|(&id, &p)| (g.edge(id), p)));
        if let (Some(id), Some(p)) = (self.uv, uv_page) {
            let span = spine.span_unchecked(g.edge(id));
            if fixed.iter().any(|&(f, q)| q == p && spans_nest(span, spine.span_unchecked(f))) {
                return Ok(None);
            }
            fixed.push((g.edge(id), p));
        }
        let incident: Vec<Edge> = self.incident_ids.iter().map(|&id| g.edge(id)).collect();
        let table = AdmissiblePageTable::build(spine, inst.ell(), fixed, &incident)?;
        let (a, b) = (inst.new_vertices()[0], inst.new_vertices()[1]);
        let pair = VertexPair::on(spine, a, b);
        debug_assert!(propagation_violations(spine, pair, &table).is_empty());

        let simple = simple_case_filter(&table);
        if simple.infeasible {
            return Ok(None);
        }
        let mut set_aside = vec![false; table.len()];
        for &(r, _) in &simple.removed {
            set_aside[r] = true;
        }
        let rows: Vec<usize> = (0..table.len()).filter(|&r| !set_aside[r]).collect();
        let reduced = reduce_remove_safe(spine, pair, &table, &rows);
        let Some(mut pages) = assign_residual(&table, &reduced.surviving) else {
            return Ok(None);
        };
        reinsert_removed(spine, pair, &table, &mut pages, &reduced.log)?;
        for &(r, p) in &simple.removed {
            pages[r] = Some(p);
        }

        let mut new_pages = vec![0; inst.m_add()];
        let first = inst.new_edge_ids().start;
        for (&id, &p) in self.fixed_ids.iter().zip(choice) {
            new_pages[id - first] = p;
        }
        if let (Some(id), Some(p)) = (self.uv, uv_page) {
            new_pages[id - first] = p;
        }
        for (row, &id) in self.incident_ids.iter().enumerate() {
            new_pages[id - first] = pages[row].ok_or_else(|| Error::Internal("edge left without a page".into()))?;
        }
        let layout = inst.layout_with(spine.clone(), &new_pages)?;
        Ok(Some(inst.certify(layout, "two-vertex branch")?))
    }
}
