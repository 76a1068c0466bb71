//! Enumeration solvers: the edges-only solver for a fixed spine and the
//! placement search over all spines.

use std::ops::AddAssign;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, VertexId};
use crate::instance::{AdmissiblePageTable, Instance};
use crate::layout::{spans_nest, Page, QueueLayout, SpineOrder};
use crate::pageset::PageSet;
use crate::parallel::first_success;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchStats {
    pub explored: u64,
    pub pruned: u64,
    pub solutions_found: u64,
}

impl BranchStats {
    pub fn absorb(&mut self, other: &BranchStats) {
        self.explored += other.explored;
        self.pruned += other.pruned;
        self.solutions_found += other.solutions_found;
    }
}

impl AddAssign for BranchStats {
    fn add_assign(&mut self, other: BranchStats) {
        self.absorb(&other);
    }
}

/// Threshold used when dropping flexible new edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PruneMode {
    /// Drop every edge with at least `m_add` admissible pages, `m_add` fixed
    /// at the original count.
    #[default]
    Original,
    /// Drop one edge at a time, comparing against the number of new edges
    /// still present, until nothing qualifies.
    Iterative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub jobs: usize,
    pub prune: PruneMode,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            jobs: 1,
            prune: PruneMode::Original,
        }
    }
}

/// Result of a complete search: a witness if one exists, plus counters.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub layout: Option<QueueLayout>,
    pub stats: BranchStats,
}

/// Insertion of the new vertices into the gaps of H's spine. Gap `i` lies
/// just before old position `i`; gap `|V(H)|` is the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    gaps: Vec<usize>,
    groups: Vec<Vec<VertexId>>,
}

impl Placement {
    /// Gap of each new vertex, in the order of `Instance::new_vertices`.
    pub fn gaps(&self) -> &[usize] {
        &self.gaps
    }

    /// New vertices sharing gap `gap`, in spine order.
    pub fn group(&self, gap: usize) -> &[VertexId] {
        &self.groups[gap]
    }

    pub fn spine(&self, inst: &Instance) -> SpineOrder {
        let old = inst.old_order();
        let mut order = Vec::with_capacity(old.len() + self.gaps.len());
        for (gap, group) in self.groups.iter().enumerate() {
            order.extend_from_slice(group);
            if let Some(&v) = old.get(gap) {
                order.push(v);
            }
        }
        SpineOrder::new(order).expect("placements never repeat a vertex")
    }

    /// Recovers the placement realised by a spine extending H's order.
    pub fn from_spine(inst: &Instance, spine: &SpineOrder) -> Result<Placement> {
        inst.require_full_spine(spine)?;
        let mut groups = vec![Vec::new(); inst.old_order().len() + 1];
        let mut gap = 0;
        for &v in spine.order() {
            if inst.is_new_vertex(v) {
                groups[gap].push(v);
            } else {
                gap += 1;
            }
        }
        let gaps = inst
            .new_vertices()
            .iter()
            .map(|&v| groups.iter().position(|g| g.contains(&v)).unwrap())
            .collect();
        Ok(Placement { gaps, groups })
    }

    fn first(new_vertices: &[VertexId], gaps: Vec<usize>, old_count: usize) -> Placement {
        let mut groups = vec![Vec::new(); old_count + 1];
        for (&v, &g) in new_vertices.iter().zip(&gaps) {
            groups[g].push(v);
        }
        Placement { gaps, groups }
    }

    /// Next order inside the gaps, later gaps varying fastest. Returns
    /// false after wrapping back to the first order.
    fn advance_within(&mut self) -> bool {
        for group in self.groups.iter_mut().rev() {
            if next_permutation(group) {
                return true;
            }
        }
        false
    }
}

pub(crate) fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// All placements in lexicographic order of (gap vector, order within gaps).
pub fn enumerate_placements(inst: &Instance) -> Placements<'_> {
    Placements {
        new_vertices: inst.new_vertices(),
        old_count: inst.old_order().len(),
        current: None,
        done: false,
    }
}

pub struct Placements<'a> {
    new_vertices: &'a [VertexId],
    old_count: usize,
    current: Option<Placement>,
    done: bool,
}

impl Iterator for Placements<'_> {
    type Item = Placement;

    fn next(&mut self) -> Option<Placement> {
        if self.done {
            return None;
        }
        let Some(p) = self.current.as_mut() else {
            let first = Placement::first(
                self.new_vertices,
                vec![0; self.new_vertices.len()],
                self.old_count,
            );
            self.current = Some(first.clone());
            return Some(first);
        };
        if p.advance_within() {
            return Some(p.clone());
        }
        let mut gaps = p.gaps.clone();
        let mut i = gaps.len();
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            gaps[i] += 1;
            if gaps[i] <= self.old_count {
                break;
            }
            gaps[i] = 0;
        }
        let next = Placement::first(self.new_vertices, gaps, self.old_count);
        self.current = Some(next.clone());
        Some(next)
    }
}

/// Closed-form number of placements: ∏_{i=1..n_add} (|V(H)| + i).
pub fn placement_count(old_count: usize, new_count: usize) -> u128 {
    (1..=new_count).map(|i| (old_count + i) as u128).product()
}

fn new_edges(inst: &Instance) -> Vec<Edge> {
    inst.new_edge_ids().map(|id| inst.g().edge(id)).collect()
}

/// Table rows to drop under `mode`, in removal order.
fn prune_rows(table: &AdmissiblePageTable, mode: PruneMode) -> Vec<usize> {
    let m = table.len();
    match mode {
        PruneMode::Original => (0..m).filter(|&i| table.admissible(i).len() >= m).collect(),
        PruneMode::Iterative => {
            let mut active = vec![true; m];
            let mut removed = Vec::new();
            loop {
                let remaining = m - removed.len();
                let hit = (0..m).find(|&i| active[i] && table.admissible(i).len() >= remaining);
                match hit {
                    Some(i) if remaining > 0 => {
                        active[i] = false;
                        removed.push(i);
                    }
                    _ => return removed,
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneOutcome {
    /// New edges that still need a search, by edge id.
    pub kept: Vec<EdgeId>,
    /// Dropped new edges in removal order; re-insert in reverse.
    pub removed: Vec<EdgeId>,
}

/// Drops new edges with many admissible pages under a spine that fixes every vertex.
pub fn prune_flexible_edges(
    inst: &Instance,
    spine: &SpineOrder,
    mode: PruneMode,
) -> Result<PruneOutcome> {
    inst.require_full_spine(spine)?;
    let table = AdmissiblePageTable::build(spine, inst.ell(), inst.old_edges(), &new_edges(inst))?;
    let removed_rows = prune_rows(&table, mode);
    let base = inst.new_edge_ids().start;
    let mut dropped = vec![false; table.len()];
    for &r in &removed_rows {
        dropped[r] = true;
    }
    Ok(PruneOutcome {
        kept: (0..table.len())
            .filter(|&r| !dropped[r])
            .map(|r| base + r)
            .collect(),
        removed: removed_rows.into_iter().map(|r| base + r).collect(),
    })
}

/// Edges-only search under a spine placing all of V(G).
pub fn solve_edges_only(
    inst: &Instance,
    spine: &SpineOrder,
    mode: PruneMode,
) -> Result<Option<QueueLayout>> {
    Ok(solve_edges_only_counted(inst, spine, mode)?.layout)
}

/// [`solve_edges_only`] reporting search nodes as explored branches.
pub fn solve_edges_only_counted(
    inst: &Instance,
    spine: &SpineOrder,
    mode: PruneMode,
) -> Result<SearchResult> {
    inst.require_full_spine(spine)?;
    let mut nodes = 0;
    let pages = edges_only_pages(inst, spine, mode, &mut nodes)?;
    let layout = match pages {
        Some(p) => Some(inst.certify(inst.layout_with(spine.clone(), &p)?, "edges-only search")?),
        None => None,
    };
    let stats = BranchStats {
        explored: nodes,
        pruned: 0,
        solutions_found: layout.is_some() as u64,
    };
    Ok(SearchResult { layout, stats })
}

pub(crate) fn edges_only_pages(
    inst: &Instance,
    spine: &SpineOrder,
    mode: PruneMode,
    nodes: &mut u64,
) -> Result<Option<Vec<Page>>> {
    let table = AdmissiblePageTable::build(spine, inst.ell(), inst.old_edges(), &new_edges(inst))?;
    let m = table.len();
    if (0..m).any(|i| table.admissible(i).is_empty()) {
        *nodes += 1;
        return Ok(None);
    }
    let removed = prune_rows(&table, mode);
    let mut present = vec![true; m];
    for &r in &removed {
        present[r] = false;
    }
    let survivors: Vec<usize> = (0..m).filter(|&r| present[r]).collect();
    let mut pages: Vec<Option<Page>> = vec![None; m];
    if !assign_survivors(&table, &survivors, 0, &mut pages, nodes) {
        return Ok(None);
    }
    for &r in removed.iter().rev() {
        let mut blocked = PageSet::empty(inst.ell());
        for &c in table.conflicts(r) {
            if let Some(p) = pages[c] {
                blocked.insert(p);
            }
        }
        let Some(p) = table.admissible(r).difference(&blocked).first() else {
            return Err(Error::Internal(
                "no free page while re-inserting a pruned edge".into(),
            ));
        };
        pages[r] = Some(p);
    }
    Ok(Some(pages.into_iter().map(|p| p.unwrap()).collect()))
}

fn assign_survivors(
    table: &AdmissiblePageTable,
    survivors: &[usize],
    depth: usize,
    pages: &mut Vec<Option<Page>>,
    nodes: &mut u64,
) -> bool {
    *nodes += 1;
    let Some(&row) = survivors.get(depth) else {
        return true;
    };
    for p in table.admissible(row).iter() {
        if table.conflicts(row).iter().any(|&c| pages[c] == Some(p)) {
            continue;
        }
        pages[row] = Some(p);
        if assign_survivors(table, survivors, depth + 1, pages, nodes) {
            return true;
        }
        pages[row] = None;
    }
    false
}

/// Placement search: every placement, each solved with the edges-only search.
/// Subtrees whose last placed vertex already has a new edge to an old
/// vertex with no admissible page are skipped; they hold no solution, so
/// the first solution found is the same as with plain enumeration.
pub fn solve_xp(inst: &Instance, opts: &SolveOptions) -> Result<SearchResult> {
    let mut stats = BranchStats::default();
    let fixed = fixed_new_edges_viable(inst);
    if !fixed {
        stats.explored = 1;
        stats.pruned = 1;
        return Ok(SearchResult {
            layout: None,
            stats,
        });
    }
    let viable = gap_viability(inst);
    let n = inst.n_add();
    let old_count = inst.old_order().len();
    let subtrees = if n == 0 { 1 } else { old_count + 1 };
    let (found, stats) = first_success(subtrees, opts.jobs, |first_gap| {
        let mut st = BranchStats::default();
        let mut gaps = vec![0; n];
        if n > 0 {
            if !viable[0][first_gap] {
                st.explored += 1;
                st.pruned += 1;
                return Ok((None, st));
            }
            gaps[0] = first_gap;
        }
        let hit = xp_descend(inst, opts.prune, &viable, &mut gaps, 1.min(n), &mut st)?;
        Ok((hit, st))
    })?;
    let layout = match found {
        Some(l) => Some(inst.certify(l, "placement search")?),
        None => None,
    };
    let mut stats = stats;
    stats.solutions_found = layout.is_some() as u64;
    Ok(SearchResult { layout, stats })
}

fn xp_descend(
    inst: &Instance,
    mode: PruneMode,
    viable: &[Vec<bool>],
    gaps: &mut Vec<usize>,
    depth: usize,
    stats: &mut BranchStats,
) -> Result<Option<QueueLayout>> {
    let old_count = inst.old_order().len();
    if depth == gaps.len() {
        let mut placement = Placement::first(inst.new_vertices(), gaps.clone(), old_count);
        loop {
            stats.explored += 1;
            let spine = placement.spine(inst);
            let mut nodes = 0;
            if let Some(pages) = edges_only_pages(inst, &spine, mode, &mut nodes)? {
                return Ok(Some(inst.layout_with(spine, &pages)?));
            }
            if !placement.advance_within() {
                return Ok(None);
            }
        }
    }
    for g in 0..=old_count {
        if !viable[depth][g] {
            stats.explored += 1;
            stats.pruned += 1;
            continue;
        }
        gaps[depth] = g;
        if let Some(l) = xp_descend(inst, mode, viable, gaps, depth + 1, stats)? {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

/// Doubled coordinates: old vertex at rank r sits at 2r+1, gap g at 2g.
fn doubled_old_spans(inst: &Instance) -> Vec<((usize, usize), Page)> {
    let spine = &inst.layout_h().spine;
    inst.old_edges()
        .map(|(e, p)| {
            let (l, r) = spine.span_unchecked(e);
            ((2 * l + 1, 2 * r + 1), p)
        })
        .collect()
}

fn has_free_page(span: (usize, usize), old: &[((usize, usize), Page)], ell: usize) -> bool {
    let mut open = PageSet::full(ell);
    for &(s, p) in old {
        if spans_nest(span, s) {
            open.remove(p);
        }
    }
    !open.is_empty()
}

/// Whether every new edge between two old vertices has an admissible page.
pub(crate) fn fixed_new_edges_viable(inst: &Instance) -> bool {
    let old = doubled_old_spans(inst);
    let spine = &inst.layout_h().spine;
    inst.new_edges_between_old().into_iter().all(|id| {
        let (l, r) = spine.span_unchecked(inst.g().edge(id));
        has_free_page((2 * l + 1, 2 * r + 1), &old, inst.ell())
    })
}

/// `viable[i][g]`: every new edge from new vertex `i` to an old vertex keeps
/// an admissible page when vertex `i` sits in gap `g`.
pub(crate) fn gap_viability(inst: &Instance) -> Vec<Vec<bool>> {
    let old = doubled_old_spans(inst);
    let spine = &inst.layout_h().spine;
    let old_count = inst.old_order().len();
    inst.new_vertices()
        .iter()
        .map(|&x| {
            let anchors: Vec<usize> = inst
                .new_edge_ids()
                .map(|id| inst.g().edge(id))
                .filter(|e| e.contains(x))
                .map(|e| e.other(x))
                .filter(|&a| !inst.is_new_vertex(a))
                .map(|a| 2 * spine.rank(a).unwrap() + 1)
                .collect();
            (0..=old_count)
                .map(|g| {
                    anchors.iter().all(|&a| {
                        let span = (a.min(2 * g), a.max(2 * g));
                        has_free_page(span, &old, inst.ell())
                    })
                })
                .collect()
        })
        .collect()
}
