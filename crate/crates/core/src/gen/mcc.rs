//! Reduction from multicolored clique: a colorful k-clique in the source
//! graph exists iff the produced instance has an extension.
//!
//! Spine of H, for each color `γ = 1..=k+1`: the left guards `bL{γ}`, the
//! anchor `b{γ}`, the right guards `bR{γ}`, then (for `γ ≤ k`) the copies
//! `u{γ}.1 .. u{γ}.{n+1}` of the vertices of color `γ` plus one closing copy.
//! The interval between `u{γ}.{i}` and `u{γ}.{i+1}` stands for the `i`-th
//! vertex of color `γ`. New vertices `x{α}` form a k-clique and each is tied
//! to `b{α}` and `b{α+1}`.
//!
//! Every source edge gets its own page carrying a twist between the two
//! intervals of its endpoints and guard edges that block everything else.
//! One extra page holds the edges that pin each `x{α}` to its color block.
//!
//! In the default form several pages reuse the same guard pairs, so H has
//! parallel edges. The simple form gives every page its own guard copies
//! `bL{γ}@{t}` and `bR{γ}@{t}`. A twist edge that would coincide with another
//! page's twist edge is moved to a twin `t{α}.{i}@{t}` placed just left of
//! its original endpoint.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};
use crate::instance::Instance;
use crate::layout::{sees, Page, PageAssignment, QueueLayout, SpineOrder};

/// A graph whose vertices carry colors `1..=k`, each color class independent.
#[derive(Clone, Debug)]
pub struct MccInstance {
    names: Vec<String>,
    graph: Graph,
    k: usize,
    color: Vec<usize>,
}

impl MccInstance {
    /// `edges` index into `names`; `color[v]` is in `1..=k`.
    pub fn new(names: Vec<String>, edges: Vec<(usize, usize)>, k: usize, color: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if color.len() != n {
            return Err(Error::Invalid("every vertex needs exactly one color".into()));
        }
        if k == 0 {
            return Err(Error::Invalid("at least one color is required".into()));
        }
        if let Some(v) = (0..n).find(|&v| color[v] == 0 || color[v] > k) {
            return Err(Error::Invalid(format!(
                "color {} of `{}` is outside 1..={k}",
                color[v], names[v]
            )));
        }
        if let Some(c) = (1..=k).find(|c| !color.contains(c)) {
            return Err(Error::Invalid(format!("color class {c} is empty")));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name) {
                return Err(Error::Invalid(format!("duplicate vertex name `{name}`")));
            }
        }
        let vertices: Vec<VertexId> = (0..n).map(VertexId::from).collect();
        let mut list = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Invalid("edge endpoint out of range".into()));
            }
            if color[a] == color[b] {
                return Err(Error::Invalid(format!(
                    "color class {} is not independent: `{}` and `{}` are adjacent",
                    color[a], names[a], names[b]
                )));
            }
            list.push(Edge::new(vertices[a], vertices[b]));
        }
        let graph = Graph::new(vertices, list)?;
        Ok(MccInstance {
            names,
            graph,
            k,
            color,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Color of vertex `v`, in `1..=k`.
    pub fn color(&self, v: VertexId) -> usize {
        self.color[v.index()]
    }

    /// Vertices of color `c` in id order.
    pub fn class(&self, c: usize) -> Vec<VertexId> {
        self.graph
            .vertices()
            .iter()
            .copied()
            .filter(|&v| self.color(v) == c)
            .collect()
    }
}

/// The produced instance and the bookkeeping needed to interpret it.
/// Colors are 1-based in the accessors; pages are 0-based.
#[derive(Clone, Debug)]
pub struct ReductionArtifacts {
    pub instance: Instance,
    /// Per source vertex, the bounds of its interval.
    pub interval_of: Vec<(VertexId, VertexId)>,
    /// Per source edge (by edge id), its page.
    pub page_of_edge: Vec<Page>,
    /// Per edge page, the source edge id it encodes.
    pub edge_of_page: Vec<usize>,
    pub dummy_page: Page,
    /// `x_1 .. x_k`.
    pub new_vertices: Vec<VertexId>,
    /// Whether the simple form (no parallel edges in H) was produced.
    pub simple: bool,
    /// Color of each source vertex.
    pub source_color: Vec<usize>,
    /// Endpoints of each source edge (by edge id) as source vertex indices.
    pub source_edges: Vec<(usize, usize)>,
    /// Per color `α`, the first and the closing copy of its block.
    pub color_block: Vec<(VertexId, VertexId)>,
    anchors: Vec<VertexId>,
    left_guard: Vec<Vec<VertexId>>,
    right_guard: Vec<Vec<VertexId>>,
}

impl ReductionArtifacts {
    /// Anchor `b{γ}` for `γ` in `1..=k+1`.
    pub fn anchor(&self, gamma: usize) -> VertexId {
        self.anchors[gamma - 1]
    }

    /// Left guard of color `γ` used on edge page `page`.
    pub fn left_guard(&self, gamma: usize, page: Page) -> VertexId {
        self.left_guard[gamma - 1][page]
    }

    /// Right guard of color `γ` used on edge page `page`.
    pub fn right_guard(&self, gamma: usize, page: Page) -> VertexId {
        self.right_guard[gamma - 1][page]
    }

    pub fn k(&self) -> usize {
        self.new_vertices.len()
    }
}

struct Namer {
    names: Vec<String>,
}

impl Namer {
    fn add(&mut self, name: String) -> VertexId {
        self.names.push(name);
        VertexId::from(self.names.len() - 1)
    }
}

/// Builds the instance. Source edges are ordered by their endpoint names
/// (smaller name first) and get pages `0..M` in that order; the pinning page
/// is `M`.
pub fn reduce_mcc(mcc: &MccInstance, simple: bool) -> Result<ReductionArtifacts> {
    let k = mcc.k;
    let names = &mcc.names;
    let mut order: Vec<usize> = (0..mcc.graph.edge_count()).collect();
    let key = |id: usize| {
        let (a, b) = mcc.graph.edge(id).endpoints();
        let (x, y) = (&names[a.index()], &names[b.index()]);
        if x <= y {
            (x.clone(), y.clone())
        } else {
            (y.clone(), x.clone())
        }
    };
    order.sort_by_key(|&id| key(id));
    let m = order.len();
    let mut page_of_edge = vec![0; m];
    for (t, &id) in order.iter().enumerate() {
        page_of_edge[id] = t;
    }
    let classes: Vec<Vec<VertexId>> = (1..=k).map(|c| mcc.class(c)).collect();
    let mut index_in_class = vec![0; names.len()];
    for class in &classes {
        for (i, v) in class.iter().enumerate() {
            index_in_class[v.index()] = i + 1;
        }
    }
    // Oriented gadget data per page: (α, i, β, j) with α < β.
    let gadgets: Vec<(usize, usize, usize, usize)> = order
        .iter()
        .map(|&id| {
            let (a, b) = mcc.graph.edge(id).endpoints();
            let (a, b) = if mcc.color(a) < mcc.color(b) { (a, b) } else { (b, a) };
            (
                mcc.color(a),
                index_in_class[a.index()],
                mcc.color(b),
                index_in_class[b.index()],
            )
        })
        .collect();
    let firsts: HashSet<(usize, usize, usize, usize)> = gadgets.iter().copied().collect();
    // Twins: page t whose second twist edge equals another page's first.
    let twinned: Vec<bool> = gadgets
        .iter()
        .map(|&(a, i, b, j)| simple && firsts.contains(&(a, i + 1, b, j + 1)))
        .collect();

    let mut namer = Namer { names: Vec::new() };
    let guard_copies = if simple { m } else { 1 };
    let mut spine = Vec::new();
    let mut anchors = Vec::new();
    let mut left_guard = Vec::new();
    let mut right_guard = Vec::new();
    let mut copies: Vec<Vec<VertexId>> = Vec::new();
    let mut twin_of = vec![None; m];
    for gamma in 1..=k + 1 {
        let guard_name = |side: &str, t: usize| {
            if simple {
                format!("b{side}{gamma}@{}", t + 1)
            } else {
                format!("b{side}{gamma}")
            }
        };
        let lefts: Vec<VertexId> = (0..guard_copies)
            .map(|t| namer.add(guard_name("L", t)))
            .collect();
        spine.extend(&lefts);
        let anchor = namer.add(format!("b{gamma}"));
        spine.push(anchor);
        anchors.push(anchor);
        let rights: Vec<VertexId> = (0..guard_copies)
            .map(|t| namer.add(guard_name("R", t)))
            .collect();
        spine.extend(&rights);
        let expand = |v: Vec<VertexId>| if simple { v } else { vec![v[0]; m] };
        if guard_copies > 0 {
            left_guard.push(expand(lefts));
            right_guard.push(expand(rights));
        } else {
            left_guard.push(Vec::new());
            right_guard.push(Vec::new());
        }
        if gamma <= k {
            let n = classes[gamma - 1].len();
            let mut block = Vec::with_capacity(n + 1);
            for i in 1..=n + 1 {
                for t in 0..m {
                    let (a, ti, _, _) = gadgets[t];
                    if twinned[t] && a == gamma && ti + 1 == i {
                        let twin = namer.add(format!("t{gamma}.{ti}@{}", t + 1));
                        spine.push(twin);
                        twin_of[t] = Some(twin);
                    }
                }
                let u = namer.add(format!("u{gamma}.{i}"));
                spine.push(u);
                block.push(u);
            }
            copies.push(block);
        }
    }
    let xs: Vec<VertexId> = (1..=k).map(|a| namer.add(format!("x{a}"))).collect();

    let u = |c: usize, i: usize| copies[c - 1][i - 1];
    let closing = |c: usize| classes[c - 1].len() + 1;
    let mut old_edges: Vec<(Edge, Page)> = Vec::with_capacity(12 * m + 3 * k);
    for (t, &(a, i, b, j)) in gadgets.iter().enumerate() {
        let left = |c: usize| left_guard[c - 1][t];
        let right = |c: usize| right_guard[c - 1][t];
        let second = twin_of[t].unwrap_or(u(a, i + 1));
        for (p, q) in [
            (left(1), u(a, 1)),
            (right(a), u(a, 1)),
            (u(b, closing(b)), left(b + 1)),
            (u(b, closing(b)), right(k + 1)),
            (u(a, i), u(b, j)),
            (second, u(b, j + 1)),
            (right(a), u(a, i + 1)),
            (u(a, i), left(a + 1)),
            (right(b), u(b, j + 1)),
            (u(b, j), left(b + 1)),
            (left(1), anchors[0]),
            (anchors[k], right(k + 1)),
        ] {
            old_edges.push((Edge::new(p, q), t));
        }
    }
    let dummy_page = m;
    for a in 1..=k {
        for (p, q) in [
            (anchors[a - 1], u(a, 1)),
            (u(a, 1), u(a, closing(a))),
            (u(a, closing(a)), anchors[a]),
        ] {
            old_edges.push((Edge::new(p, q), dummy_page));
        }
    }
    let mut new_edges = Vec::with_capacity(k * (k - 1) / 2 + 2 * k);
    for a in 0..k {
        for b in a + 1..k {
            new_edges.push(Edge::new(xs[a], xs[b]));
        }
    }
    for a in 0..k {
        new_edges.push(Edge::new(xs[a], anchors[a]));
        new_edges.push(Edge::new(xs[a], anchors[a + 1]));
    }
    let instance = Instance::new(m + 1, namer.names, spine, old_edges, new_edges, !simple)?;

    let mut interval_of = vec![(VertexId(0), VertexId(0)); names.len()];
    for (c, class) in classes.iter().enumerate() {
        for (i, v) in class.iter().enumerate() {
            interval_of[v.index()] = (copies[c][i], copies[c][i + 1]);
        }
    }
    let color_block = (1..=k).map(|c| (u(c, 1), u(c, closing(c)))).collect();
    Ok(ReductionArtifacts {
        instance,
        interval_of,
        page_of_edge,
        edge_of_page: order,
        dummy_page,
        new_vertices: xs,
        simple,
        source_color: mcc.color.clone(),
        source_edges: mcc
            .graph
            .edges()
            .iter()
            .map(|e| (e.endpoints().0.index(), e.endpoints().1.index()))
            .collect(),
        color_block,
        anchors,
        left_guard,
        right_guard,
    })
}

/// Findings of `verify_reduction_properties`; empty means every check passed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionReport {
    pub violations: Vec<String>,
}

impl ReductionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural claims behind the reduction on a concrete solution:
/// * every `x_α` lies strictly inside an interval of color `α`;
/// * the pinning edges use the pinning page;
/// * a clique edge `x_α x_β` sits on the page of a source edge between
///   colors `α` and `β`, with both endpoints in that edge's intervals;
/// * from probe positions left of the left guard of color `α` (or right of
///   the block of `α`), the anchor `b{α}` is hidden on every edge page.
pub fn verify_reduction_properties(art: &ReductionArtifacts, layout: &QueueLayout) -> Result<ReductionReport> {
    let inst = &art.instance;
    let mut violations = Vec::new();
    if !inst.is_solution(layout)? {
        violations.push("layout is not a valid extension".to_string());
        return Ok(ReductionReport { violations });
    }
    let k = art.k();
    let spine = &layout.spine;
    let rank = |v: VertexId| spine.rank(v).expect("solution spine covers G");
    let inside = |x: VertexId, (lo, hi): (VertexId, VertexId)| rank(lo) < rank(x) && rank(x) < rank(hi);

    for (a, &x) in art.new_vertices.iter().enumerate() {
        let own = (0..art.interval_of.len())
            .filter(|&v| art.source_color[v] == a + 1)
            .any(|v| inside(x, art.interval_of[v]));
        if !own {
            violations.push(format!("{} is not inside an interval of color {}", inst.name(x), a + 1));
        }
    }

    let clique_count = k * (k - 1) / 2;
    let first_new = inst.new_edge_ids().start;
    let page = |id: usize| layout.assignment.page(id);
    for offset in clique_count..clique_count + 2 * k {
        let id = first_new + offset;
        if page(id) != art.dummy_page {
            violations.push(format!("pinning edge {} is not on the pinning page", inst.edge_label(id)));
        }
    }
    let mut offset = 0;
    for a in 0..k {
        for b in a + 1..k {
            let id = first_new + offset;
            offset += 1;
            let p = page(id);
            let label = inst.edge_label(id);
            let Some(&source) = art.edge_of_page.get(p) else {
                violations.push(format!("clique edge {label} is on the pinning page"));
                continue;
            };
            let (s, t) = art.source_edges[source];
            let (s, t) = if art.source_color[s] <= art.source_color[t] { (s, t) } else { (t, s) };
            if (art.source_color[s], art.source_color[t]) != (a + 1, b + 1) {
                violations.push(format!("clique edge {label} uses a page of other colors"));
                continue;
            }
            let (xa, xb) = (art.new_vertices[a], art.new_vertices[b]);
            if !inside(xa, art.interval_of[s]) || !inside(xb, art.interval_of[t]) {
                violations.push(format!("clique edge {label} endpoints miss the intervals of its page"));
            }
        }
    }

    violations.extend(hidden_anchor_violations(art)?);
    Ok(ReductionReport { violations })
}

/// Probes every gap of H's spine in the guarded ranges with `sees`.
fn hidden_anchor_violations(art: &ReductionArtifacts) -> Result<Vec<String>> {
    let inst = &art.instance;
    let h = inst.h();
    let order = inst.old_order();
    let probe = VertexId::from(inst.g().vertex_count());
    let mut vertices = order.to_vec();
    vertices.push(probe);
    let graph = Graph::with_parallel_edges(vertices, h.edges().to_vec())?;
    let assignment = PageAssignment::new(inst.layout_h().assignment.pages().to_vec(), inst.ell())?;
    let h_spine = &inst.layout_h().spine;
    let rank = |v: VertexId| h_spine.rank(v).expect("old vertex");
    let k = art.k();
    let mut out = Vec::new();
    for p in 0..art.edge_of_page.len() {
        let start = rank(art.left_guard(1, p)) + 1;
        let mut probes: Vec<(usize, usize)> = Vec::new();
        for a in 2..=k + 1 {
            probes.extend((start..=rank(art.left_guard(a, p))).map(|g| (a, g)));
        }
        let end = rank(art.right_guard(k + 1, p));
        for a in 1..=k {
            probes.extend((rank(art.color_block[a - 1].1) + 1..=end).map(|g| (a, g)));
        }
        for (a, gap) in probes {
            let mut spine = order.to_vec();
            spine.insert(gap, probe);
            let layout = QueueLayout::new(SpineOrder::new(spine)?, assignment.clone());
            if sees(&graph, &layout, probe, art.anchor(a), p)? {
                out.push(format!(
                    "anchor b{a} is visible on page {} from gap {gap}",
                    p + 1
                ));
            }
        }
    }
    Ok(out)
}
