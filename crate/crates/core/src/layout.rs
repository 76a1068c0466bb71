use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Graph, VertexId};

/// Zero-based page index. Files and the CLI use 1-based pages.
pub type Page = usize;

const ABSENT: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineOrder {
    order: Vec<VertexId>,
    rank: Vec<u32>,
}

impl SpineOrder {
    pub fn new(order: Vec<VertexId>) -> Result<Self> {
        let universe = order.iter().map(|v| v.index() + 1).max().unwrap_or(0);
        let mut rank = vec![ABSENT; universe];
        for (i, &v) in order.iter().enumerate() {
            if rank[v.index()] != ABSENT {
                return Err(Error::Structure(format!("vertex {v} appears twice on the spine")));
            }
            rank[v.index()] = i as u32;
        }
        Ok(SpineOrder { order, rank })
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn rank(&self, v: VertexId) -> Option<usize> {
        match self.rank.get(v.index()) {
            Some(&r) if r != ABSENT => Some(r as usize),
            _ => None,
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.rank(v).is_some()
    }

    /// Left and right spine positions of `e`, or `None` if an endpoint is missing.
    pub fn span(&self, e: Edge) -> Option<(usize, usize)> {
        let (a, b) = e.endpoints();
        let (ra, rb) = (self.rank(a)?, self.rank(b)?);
        Some(if ra < rb { (ra, rb) } else { (rb, ra) })
    }

    pub(crate) fn span_unchecked(&self, e: Edge) -> (usize, usize) {
        let (a, b) = e.endpoints();
        let (ra, rb) = (self.rank[a.index()] as usize, self.rank[b.index()] as usize);
        if ra < rb {
            (ra, rb)
        } else {
            (rb, ra)
        }
    }
}

/// Strict containment of one span in the other. Shared endpoints never nest.
pub(crate) fn spans_nest(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 < b.0 && b.1 < a.1) || (b.0 < a.0 && a.1 < b.1)
}

pub fn is_nesting(spine: &SpineOrder, e1: Edge, e2: Edge) -> Result<bool> {
    let span = |e: Edge| {
        spine
            .span(e)
            .ok_or_else(|| Error::Precondition(format!("endpoint of {e:?} is not on the spine")))
    };
    Ok(spans_nest(span(e1)?, span(e2)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageAssignment {
    pages: Vec<Page>,
    page_count: usize,
}

impl PageAssignment {
    /// `pages[i]` is the page of edge `i` of the graph the assignment belongs to.
    pub fn new(pages: Vec<Page>, page_count: usize) -> Result<Self> {
        if let Some(&page) = pages.iter().find(|&&p| p >= page_count) {
            return Err(Error::PageOutOfRange {
                page,
                ell: page_count,
            });
        }
        Ok(PageAssignment { pages, page_count })
    }

    pub fn page(&self, e: EdgeId) -> Page {
        self.pages[e]
    }

    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    pub fn page_count(&self) -> usize {
        self.page_count
    }

    pub fn len(&self) -> usize {
        self.pages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pages.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueueLayout {
    pub spine: SpineOrder,
    pub assignment: PageAssignment,
}

impl QueueLayout {
    pub fn new(spine: SpineOrder, assignment: PageAssignment) -> Self {
        QueueLayout { spine, assignment }
    }

    pub fn page_count(&self) -> usize {
        self.assignment.page_count()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Same-page nesting pairs, by edge id, smaller id first.
    pub violations: Vec<(EdgeId, EdgeId)>,
    /// Set when enumeration stopped at the cap.
    pub truncated: bool,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_covers(g: &Graph, layout: &QueueLayout) -> Result<()> {
    if layout.spine.len() != g.vertex_count() {
        return Err(Error::Structure(format!(
            "spine has {} vertices, graph has {}",
            layout.spine.len(),
            g.vertex_count()
        )));
    }
    if let Some(v) = g.vertices().iter().find(|&&v| !layout.spine.contains(v)) {
        return Err(Error::Structure(format!("vertex {v} is not on the spine")));
    }
    if layout.assignment.len() != g.edge_count() {
        return Err(Error::Structure(format!(
            "assignment covers {} edges, graph has {}",
            layout.assignment.len(),
            g.edge_count()
        )));
    }
    Ok(())
}

pub fn validate_layout(g: &Graph, layout: &QueueLayout) -> Result<ValidationReport> {
    validate_layout_capped(g, layout, usize::MAX)
}

pub fn validate_layout_capped(
    g: &Graph,
    layout: &QueueLayout,
    cap: usize,
) -> Result<ValidationReport> {
    check_covers(g, layout)?;
    let mut by_page: Vec<Vec<EdgeId>> = vec![Vec::new(); layout.page_count()];
    for (id, &p) in layout.assignment.pages().iter().enumerate() {
        by_page[p].push(id);
    }
    let spans: Vec<_> = g
        .edges()
        .iter()
        .map(|&e| layout.spine.span_unchecked(e))
        .collect();
    let mut report = ValidationReport::default();
    let mut found = Vec::new();
    for ids in &by_page {
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                if spans_nest(spans[a], spans[b]) {
                    if found.len() == cap {
                        report.truncated = true;
                        break;
                    }
                    found.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    found.sort_unstable();
    report.violations = found;
    Ok(report)
}

/// Whether `layout_g` keeps every page and every relative vertex order of `layout_h`.
pub fn extends(g: &Graph, layout_g: &QueueLayout, h: &Graph, layout_h: &QueueLayout) -> bool {
    let mut last = None;
    for &v in layout_h.spine.order() {
        let Some(r) = layout_g.spine.rank(v) else {
            return false;
        };
        if last.is_some_and(|l| l >= r) {
            return false;
        }
        last = Some(r);
    }
    if layout_g.assignment.len() != g.edge_count() || layout_h.assignment.len() != h.edge_count() {
        return false;
    }
    let mut pool: HashMap<Edge, Vec<Page>> = HashMap::new();
    for (id, &e) in g.edges().iter().enumerate() {
        pool.entry(e).or_default().push(layout_g.assignment.page(id));
    }
    for (id, &e) in h.edges().iter().enumerate() {
        let want = layout_h.assignment.page(id);
        let Some(pages) = pool.get_mut(&e) else {
            return false;
        };
        match pages.iter().position(|&p| p == want) {
            Some(i) => {
                pages.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

/// Whether an edge `uv` could be added on page `p` without creating a nesting.
pub fn sees(g: &Graph, layout: &QueueLayout, u: VertexId, v: VertexId, p: Page) -> Result<bool> {
    if p >= layout.page_count() {
        return Err(Error::PageOutOfRange {
            page: p,
            ell: layout.page_count(),
        });
    }
    if u == v {
        return Err(Error::Precondition("visibility needs two distinct vertices".into()));
    }
    let probe = layout
        .spine
        .span(Edge::new(u, v))
        .ok_or_else(|| Error::Precondition("visibility query off the spine".into()))?;
    Ok(g.edges()
        .iter()
        .zip(layout.assignment.pages())
        .filter(|&(_, &q)| q == p)
        .all(|(&e, _)| !spans_nest(probe, layout.spine.span_unchecked(e))))
}
