//! Search over page assignments of the new edges and orders of the new
//! vertices, each leaf settled by 2-SAT.

use crate::branch::{next_permutation, BranchStats, SearchResult, SolveOptions};
use crate::error::Result;
use crate::graph::{EdgeId, VertexId};
use crate::instance::Instance;
use crate::layout::{spans_nest, Page, PageAssignment, QueueLayout};
use crate::parallel::first_success;

use super::encode::{decode_spine, encode_instance, EndpointOrder};
use super::sat::solve_2sat;

/// Enumerates page assignments of E_add in base-`ell` counter order (first
/// new edge most significant), and for each one the orders of the new
/// vertices that have new edges, lexicographically. The placement of new
/// vertices among old ones is left to the 2-SAT formula.
///
/// New edges between two old vertices have a known span, so a page that
/// makes them nest with H or with each other cuts the subtree at once.
pub fn solve_fpt_kappa_ell(inst: &Instance, opts: &SolveOptions) -> Result<SearchResult> {
    let new_ids: Vec<EdgeId> = inst.new_edge_ids().collect();
    let mut movers: Vec<VertexId> = inst
        .new_vertices()
        .iter()
        .copied()
        .filter(|&v| new_ids.iter().any(|&id| inst.g().edge(id).contains(v)))
        .collect();
    movers.sort_unstable();
    let ctx = Context {
        inst,
        new_ids: &new_ids,
        movers: &movers,
    };
    let subtrees = if new_ids.is_empty() { 1 } else { inst.ell() };
    let (found, mut stats) = first_success(subtrees, opts.jobs, |first| {
        let mut st = BranchStats::default();
        let mut pages = Vec::with_capacity(new_ids.len());
        let hit = if new_ids.is_empty() {
            ctx.leaf(&pages, &mut st)?
        } else if !ctx.fits(&pages, first) {
            st.explored += 1;
            st.pruned += 1;
            None
        } else {
            pages.push(first);
            ctx.descend(&mut pages, &mut st)?
        };
        Ok((hit, st))
    })?;
    let layout = match found {
        Some(l) => Some(inst.certify(l, "2-SAT search")?),
        None => None,
    };
    stats.solutions_found = layout.is_some() as u64;
    Ok(SearchResult { layout, stats })
}

struct Context<'a> {
    inst: &'a Instance,
    new_ids: &'a [EdgeId],
    movers: &'a [VertexId],
}

impl Context<'_> {
    fn descend(&self, pages: &mut Vec<Page>, stats: &mut BranchStats) -> Result<Option<QueueLayout>> {
        if pages.len() == self.new_ids.len() {
            return self.leaf(pages, stats);
        }
        for p in 0..self.inst.ell() {
            if !self.fits(pages, p) {
                stats.explored += 1;
                stats.pruned += 1;
                continue;
            }
            pages.push(p);
            let hit = self.descend(pages, stats)?;
            pages.pop();
            if hit.is_some() {
                return Ok(hit);
            }
        }
        Ok(None)
    }

    /// Whether the next new edge may take `page`, judged only where its span
    /// is already known.
    fn fits(&self, pages: &[Page], page: Page) -> bool {
        let inst = self.inst;
        let spine = &inst.layout_h().spine;
        let e = inst.g().edge(self.new_ids[pages.len()]);
        let Some(span) = spine.span(e) else {
            return true;
        };
        let clash_old = inst
            .old_edges()
            .any(|(f, p)| p == page && spans_nest(span, spine.span_unchecked(f)));
        let clash_new = pages.iter().enumerate().any(|(i, &p)| {
            p == page
                && spine
                    .span(inst.g().edge(self.new_ids[i]))
                    .is_some_and(|s| spans_nest(span, s))
        });
        !clash_old && !clash_new
    }

    fn leaf(&self, pages: &[Page], stats: &mut BranchStats) -> Result<Option<QueueLayout>> {
        let inst = self.inst;
        let mut all = inst.layout_h().assignment.pages().to_vec();
        all.extend_from_slice(pages);
        let sigma = PageAssignment::new(all, inst.ell())?;
        let mut order = self.movers.to_vec();
        loop {
            stats.explored += 1;
            let eo = EndpointOrder::new(order.clone());
            if let Some(enc) = encode_instance(inst, &sigma, &eo)? {
                if let Some(assignment) = solve_2sat(&enc.formula) {
                    let spine = decode_spine(inst, &enc.vars, &assignment)?;
                    return Ok(Some(QueueLayout::new(spine, sigma)));
                }
            }
            if !next_permutation(&mut order) {
                return Ok(None);
            }
        }
    }
}
