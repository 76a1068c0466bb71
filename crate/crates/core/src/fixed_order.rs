//! Page assignment under a fixed spine.
//!
//! With the spine fixed, the nesting relation on edges is a containment
//! order on intervals. Its comparability graph (the conflict graph) is a
//! permutation graph, the minimum page count is the longest chain, and
//! extending a precoloring is a list-colouring search on that graph.

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};
use crate::layout::{spans_nest, Page, PageAssignment, QueueLayout, SpineOrder};
use crate::pageset::PageSet;

/// Nodes are edge ids of the source graph; adjacency is nesting.
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    spans: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl ConflictGraph {
    pub fn node_count(&self) -> usize {
        self.spans.len()
    }

    pub fn span(&self, node: usize) -> (usize, usize) {
        self.spans[node]
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Adjacent pairs with the smaller node first.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adjacency.iter().enumerate() {
            out.extend(ns.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }
}

fn spans_of(g: &Graph, spine: &SpineOrder) -> Result<Vec<(usize, usize)>> {
    g.edges()
        .iter()
        .map(|&e| {
            spine
                .span(e)
                .ok_or_else(|| Error::Precondition(format!("edge {e:?} is not on the spine")))
        })
        .collect()
}

pub fn build_conflict_graph(g: &Graph, spine: &SpineOrder) -> Result<ConflictGraph> {
    let spans = spans_of(g, spine)?;
    let mut adjacency = vec![Vec::new(); spans.len()];
    for a in 0..spans.len() {
        for b in a + 1..spans.len() {
            if spans_nest(spans[a], spans[b]) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
    }
    for ns in &mut adjacency {
        ns.sort_unstable();
    }
    Ok(ConflictGraph { spans, adjacency })
}

/// Transitive orientations of the conflict graph and of its complement.
#[derive(Clone, Debug)]
pub struct OrientationWitness {
    /// Outer edge to nested edge.
    pub forward: Vec<(usize, usize)>,
    /// Between non-nesting edges, earlier start first (ties by end, then id).
    pub complement_forward: Vec<(usize, usize)>,
}

pub fn orient_witness(cg: &ConflictGraph) -> Result<OrientationWitness> {
    let n = cg.node_count();
    let mut forward = Vec::new();
    let mut complement_forward = Vec::new();
    let key = |i: usize| (cg.spans[i].0, cg.spans[i].1, i);
    for a in 0..n {
        for b in a + 1..n {
            let (sa, sb) = (cg.spans[a], cg.spans[b]);
            if cg.is_adjacent(a, b) {
                if sa.0 < sb.0 {
                    forward.push((a, b));
                } else {
                    forward.push((b, a));
                }
            } else if key(a) < key(b) {
                complement_forward.push((a, b));
            } else {
                complement_forward.push((b, a));
            }
        }
    }
    if !is_transitive(n, &forward) {
        return Err(Error::Internal("nesting orientation is not transitive".into()));
    }
    if !is_transitive(n, &complement_forward) {
        return Err(Error::Internal("complement orientation is not transitive".into()));
    }
    Ok(OrientationWitness {
        forward,
        complement_forward,
    })
}

/// Whether `a→b` and `b→c` always come with `a→c`.
pub fn is_transitive(n: usize, arcs: &[(usize, usize)]) -> bool {
    let mut matrix = vec![false; n * n];
    let mut out = vec![Vec::new(); n];
    for &(a, b) in arcs {
        matrix[a * n + b] = true;
        out[a].push(b);
    }
    arcs.iter()
        .all(|&(a, b)| out[b].iter().all(|&c| a != c && matrix[a * n + c]))
}

/// The graph Q(π) with its spine.
#[derive(Clone, Debug)]
pub struct PermutationRealization {
    pub graph: Graph,
    pub spine: SpineOrder,
    /// `names[v]` is `"x,1"` or `"x,2"` for element `x`.
    pub names: Vec<String>,
}

impl PermutationRealization {
    /// Vertex `(element, side)` with 1-based element and side in {1, 2}.
    pub fn vertex(element: usize, side: usize) -> VertexId {
        VertexId::from(2 * (element - 1) + side - 1)
    }
}

/// Builds Q(π) for `perm`, a sequence of the elements `1..=n`. The first
/// copies come in element order, the second copies in the order of `perm`;
/// edge `x - 1` joins the two copies of element `x`.
pub fn realize_permutation(perm: &[usize]) -> Result<PermutationRealization> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &x in perm {
        if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::Invalid(format!(
                "{perm:?} is not a permutation of 1..={n}"
            )));
        }
    }
    let vertex = PermutationRealization::vertex;
    let mut order: Vec<VertexId> = (1..=n).map(|x| vertex(x, 1)).collect();
    order.extend(perm.iter().map(|&x| vertex(x, 2)));
    let edges = (1..=n).map(|x| Edge::new(vertex(x, 1), vertex(x, 2))).collect();
    let names = (1..=n)
        .flat_map(|x| [format!("{x},1"), format!("{x},2")])
        .collect();
    let vertices = (0..2 * n).map(VertexId::from).collect();
    Ok(PermutationRealization {
        graph: Graph::new(vertices, edges)?,
        spine: SpineOrder::new(order)?,
        names,
    })
}

/// Prefix-maximum Fenwick tree.
struct MaxTree(Vec<usize>);

impl MaxTree {
    fn update(&mut self, mut i: usize, v: usize) {
        i += 1;
        while i < self.0.len() {
            self.0[i] = self.0[i].max(v);
            i += i & i.wrapping_neg();
        }
    }

    fn query(&self, mut len: usize) -> usize {
        let mut best = 0;
        while len > 0 {
            best = best.max(self.0[len]);
            len -= len & len.wrapping_neg();
        }
        best
    }
}

/// Minimum number of pages under `spine` and the chain-depth witness:
/// every edge goes to the page numbered by the longest chain of edges
/// nesting over it.
pub fn fixed_order_min_pages(g: &Graph, spine: &SpineOrder) -> Result<(usize, QueueLayout)> {
    let spans = spans_of(g, spine)?;
    let n = spine.len();
    let mut idx: Vec<usize> = (0..spans.len()).collect();
    idx.sort_by_key(|&i| (spans[i].0, std::cmp::Reverse(spans[i].1)));
    // Indexed by reversed right endpoint so "right end beyond r" is a prefix.
    let mut tree = MaxTree(vec![0; n + 1]);
    let mut depth = vec![0; spans.len()];
    let mut start = 0;
    while start < idx.len() {
        let left = spans[idx[start]].0;
        let end = idx[start..]
            .iter()
            .position(|&i| spans[i].0 != left)
            .map_or(idx.len(), |k| start + k);
        for &i in &idx[start..end] {
            depth[i] = tree.query(n - 1 - spans[i].1) + 1;
        }
        for &i in &idx[start..end] {
            tree.update(n - 1 - spans[i].1, depth[i]);
        }
        start = end;
    }
    let count = depth.iter().copied().max().unwrap_or(0);
    let pages = depth.iter().map(|d| d - 1).collect();
    Ok((
        count,
        QueueLayout::new(spine.clone(), PageAssignment::new(pages, count)?),
    ))
}

/// Exact search for an `ell`-page assignment extending `precolored`
/// (indexed by edge id). Exponential in the worst case.
pub fn fixed_order_assign(
    g: &Graph,
    spine: &SpineOrder,
    ell: usize,
    precolored: &[Option<Page>],
) -> Result<Option<QueueLayout>> {
    Ok(fixed_order_assign_with_stats(g, spine, ell, precolored)?.0)
}

/// [`fixed_order_assign`] plus the number of search nodes visited.
pub fn fixed_order_assign_with_stats(
    g: &Graph,
    spine: &SpineOrder,
    ell: usize,
    precolored: &[Option<Page>],
) -> Result<(Option<QueueLayout>, u64)> {
    if ell == 0 {
        return Err(Error::Invalid("page count must be at least 1".into()));
    }
    if precolored.len() != g.edge_count() {
        return Err(Error::Structure(format!(
            "precoloring covers {} edges, graph has {}",
            precolored.len(),
            g.edge_count()
        )));
    }
    if let Some(&page) = precolored.iter().flatten().find(|&&p| p >= ell) {
        return Err(Error::PageOutOfRange { page, ell });
    }
    let cg = build_conflict_graph(g, spine)?;
    let m = g.edge_count();
    let mut domains: Vec<PageSet> = vec![PageSet::full(ell); m];
    for (a, b) in cg.pairs() {
        match (precolored[a], precolored[b]) {
            (Some(p), Some(q)) if p == q => return Ok((None, 0)),
            (Some(p), None) => domains[b].remove(p),
            (None, Some(q)) => domains[a].remove(q),
            _ => {}
        }
    }
    let mut order: Vec<usize> = (0..m).filter(|&i| precolored[i].is_none()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(cg.neighbors(i).len()), i));
    let mut pages: Vec<Option<Page>> = precolored.to_vec();
    let mut search = ColorSearch {
        cg: &cg,
        order: &order,
        domains,
        pages: &mut pages,
        nodes: 0,
    };
    let found = search.run(0);
    let nodes = search.nodes;
    if !found {
        return Ok((None, nodes));
    }
    let pages = pages.into_iter().map(|p| p.unwrap_or(0)).collect();
    Ok((
        Some(QueueLayout::new(spine.clone(), PageAssignment::new(pages, ell)?)),
        nodes,
    ))
}

struct ColorSearch<'a> {
    cg: &'a ConflictGraph,
    order: &'a [usize],
    domains: Vec<PageSet>,
    pages: &'a mut Vec<Option<Page>>,
    nodes: u64,
}

impl ColorSearch<'_> {
    fn run(&mut self, depth: usize) -> bool {
        self.nodes += 1;
        let Some(&node) = self.order.get(depth) else {
            return true;
        };
        let candidates: Vec<Page> = self.domains[node].iter().collect();
        for p in candidates {
            self.pages[node] = Some(p);
            let mut pruned = Vec::new();
            let mut wiped = false;
            for &w in self.cg.neighbors(node) {
                if self.pages[w].is_none() && self.domains[w].contains(p) {
                    self.domains[w].remove(p);
                    pruned.push(w);
                    if self.domains[w].is_empty() {
                        wiped = true;
                        break;
                    }
                }
            }
            if !wiped && self.run(depth + 1) {
                return true;
            }
            for w in pruned {
                self.domains[w].insert(p);
            }
            self.pages[node] = None;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::validate_layout;

    fn line(n: u32) -> (Vec<VertexId>, SpineOrder) {
        let vs: Vec<_> = (0..n).map(VertexId).collect();
        (vs.clone(), SpineOrder::new(vs).unwrap())
    }

    fn e(a: u32, b: u32) -> Edge {
        Edge::new(VertexId(a), VertexId(b))
    }

    fn rainbow(k: u32) -> (Graph, SpineOrder) {
        let (vs, spine) = line(2 * k);
        let edges = (0..k).map(|i| e(i, 2 * k - 1 - i)).collect();
        (Graph::new(vs, edges).unwrap(), spine)
    }

    #[test]
    fn conflict_graph_examples() {
        let (vs, spine) = line(4);
        let g = Graph::new(vs.clone(), vec![e(0, 3), e(1, 2)]).unwrap();
        assert_eq!(build_conflict_graph(&g, &spine).unwrap().edge_count(), 1);
        let g = Graph::new(vs, vec![e(0, 2), e(1, 3)]).unwrap();
        assert_eq!(build_conflict_graph(&g, &spine).unwrap().edge_count(), 0);
        let (g, spine) = rainbow(5);
        assert_eq!(build_conflict_graph(&g, &spine).unwrap().edge_count(), 10);
    }

    #[test]
    fn rainbow_orientation_is_a_tournament_outside_in() {
        let (g, spine) = rainbow(3);
        let w = orient_witness(&build_conflict_graph(&g, &spine).unwrap()).unwrap();
        let mut f = w.forward.clone();
        f.sort();
        assert_eq!(f, vec![(0, 1), (0, 2), (1, 2)]);
        assert!(w.complement_forward.is_empty());
    }

    #[test]
    fn twist_chain_orientation_follows_starts() {
        let (vs, spine) = line(6);
        let g = Graph::new(vs, vec![e(2, 5), e(0, 3), e(1, 4)]).unwrap();
        let w = orient_witness(&build_conflict_graph(&g, &spine).unwrap()).unwrap();
        assert!(w.forward.is_empty());
        let mut f = w.complement_forward.clone();
        f.sort();
        assert_eq!(f, vec![(1, 0), (1, 2), (2, 0)]);
    }

    #[test]
    fn transitivity_checker() {
        assert!(is_transitive(3, &[(0, 1), (1, 2), (0, 2)]));
        assert!(!is_transitive(3, &[(0, 1), (1, 2)]));
        assert!(!is_transitive(2, &[(0, 1), (1, 0)]));
    }

    #[test]
    fn permutation_examples() {
        let count = |p: &[usize]| {
            let r = realize_permutation(p).unwrap();
            build_conflict_graph(&r.graph, &r.spine).unwrap().pairs()
        };
        assert!(count(&[1, 2, 3, 4]).is_empty());
        assert_eq!(count(&[4, 3, 2, 1]).len(), 6);
        assert_eq!(count(&[2, 1, 3]), vec![(0, 1)]);
        assert!(realize_permutation(&[1, 1]).is_err());
        assert!(realize_permutation(&[0, 1]).is_err());
        assert!(realize_permutation(&[1, 3]).is_err());
    }

    #[test]
    fn min_pages_examples() {
        let (vs, spine) = line(3);
        let empty = Graph::new(vs, vec![]).unwrap();
        let (count, layout) = fixed_order_min_pages(&empty, &spine).unwrap();
        assert_eq!(count, 0);
        assert!(validate_layout(&empty, &layout).unwrap().ok());
        for k in 1..=6 {
            let (g, spine) = rainbow(k);
            let (count, layout) = fixed_order_min_pages(&g, &spine).unwrap();
            assert_eq!(count, k as usize);
            assert!(validate_layout(&g, &layout).unwrap().ok());
        }
    }

    #[test]
    fn shared_left_endpoints_do_not_stack() {
        // (0,5) and (0,3) share 0; (1,2) sits under both.
        let (vs, spine) = line(6);
        let g = Graph::new(vs, vec![e(0, 5), e(0, 3), e(1, 2)]).unwrap();
        let (count, layout) = fixed_order_min_pages(&g, &spine).unwrap();
        assert_eq!(count, 2);
        assert_eq!(layout.assignment.pages(), &[0, 0, 1]);
    }

    #[test]
    fn assign_examples() {
        let (g, spine) = rainbow(2);
        assert!(fixed_order_assign(&g, &spine, 2, &[None, None])
            .unwrap()
            .is_some());
        assert!(fixed_order_assign(&g, &spine, 2, &[Some(0), Some(0)])
            .unwrap()
            .is_none());
        assert!(fixed_order_assign(&g, &spine, 1, &[None, None])
            .unwrap()
            .is_none());
        let l = fixed_order_assign(&g, &spine, 3, &[None, Some(0)])
            .unwrap()
            .unwrap();
        assert_eq!(l.assignment.page(1), 0);
        assert_ne!(l.assignment.page(0), 0);
        assert!(matches!(
            fixed_order_assign(&g, &spine, 2, &[Some(2), None]),
            Err(Error::PageOutOfRange { .. })
        ));
    }
}
