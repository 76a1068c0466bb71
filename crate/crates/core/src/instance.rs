use std::collections::{HashMap, HashSet};
use std::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Graph, VertexId};
use crate::layout::{
    extends, spans_nest, validate_layout, Page, PageAssignment, QueueLayout, SpineOrder,
};
use crate::pageset::PageSet;

/// A queue layout extension instance: `ell` pages, the full graph G, the
/// subgraph H and H's fixed layout.
///
/// Vertex ids are dense over V(G). Edge ids of G list H's edges first, in
/// H's order, followed by the new edges; so `g.edge(i) == h.edge(i)` for
/// every old edge `i`.
#[derive(Clone, Debug)]
pub struct Instance {
    ell: usize,
    names: Vec<String>,
    lookup: HashMap<String, VertexId>,
    g: Graph,
    h: Graph,
    layout_h: QueueLayout,
    is_new: Vec<bool>,
    new_vertices: Vec<VertexId>,
}

impl Instance {
    /// Builds an instance over vertex ids `0..names.len()`. `h_spine` lists
    /// H's vertices in spine order; `old_edges` are H's edges with their pages.
    /// Parallel old edges are accepted only with `allow_parallel`.
    pub fn new(
        ell: usize,
        names: Vec<String>,
        h_spine: Vec<VertexId>,
        old_edges: Vec<(Edge, Page)>,
        new_edges: Vec<Edge>,
        allow_parallel: bool,
    ) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Invalid("an instance needs at least one page".into()));
        }
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if lookup.insert(name.clone(), VertexId::from(i)).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex name `{name}`")));
            }
        }
        if let Some(v) = h_spine.iter().find(|v| v.index() >= names.len()) {
            return Err(Error::Invalid(format!("spine vertex {v} is unknown")));
        }
        let all: Vec<VertexId> = (0..names.len()).map(VertexId::from).collect();
        let h_edges: Vec<Edge> = old_edges.iter().map(|&(e, _)| e).collect();
        let h = if allow_parallel {
            Graph::with_parallel_edges(h_spine.clone(), h_edges.clone())?
        } else {
            Graph::new(h_spine.clone(), h_edges.clone())?
        };
        let old_set: HashSet<Edge> = h_edges.iter().copied().collect();
        let mut fresh = HashSet::new();
        for &e in &new_edges {
            if old_set.contains(&e) {
                return Err(Error::Invalid(format!(
                    "new edge {} is already an edge of H",
                    edge_names(&names, e)
                )));
            }
            if !fresh.insert(e) {
                return Err(Error::Invalid(format!(
                    "new edge {} listed twice",
                    edge_names(&names, e)
                )));
            }
        }
        let mut g_edges = h_edges;
        g_edges.extend_from_slice(&new_edges);
        let g = if allow_parallel {
            Graph::with_parallel_edges(all, g_edges)?
        } else {
            Graph::new(all, g_edges)?
        };
        let pages: Vec<Page> = old_edges.iter().map(|&(_, p)| p).collect();
        let layout_h = QueueLayout::new(
            SpineOrder::new(h_spine)?,
            PageAssignment::new(pages, ell)?,
        );
        let report = validate_layout(&h, &layout_h)?;
        if !report.ok() {
            return Err(Error::InvalidLayout(report));
        }
        let mut is_new = vec![true; names.len()];
        for &v in h.vertices() {
            is_new[v.index()] = false;
        }
        let new_vertices = (0..names.len())
            .filter(|&i| is_new[i])
            .map(VertexId::from)
            .collect();
        Ok(Instance {
            ell,
            names,
            lookup,
            g,
            h,
            layout_h,
            is_new,
            new_vertices,
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn g(&self) -> &Graph {
        &self.g
    }

    pub fn h(&self) -> &Graph {
        &self.h
    }

    pub fn layout_h(&self) -> &QueueLayout {
        &self.layout_h
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.lookup.get(name).copied()
    }

    pub fn edge_label(&self, id: EdgeId) -> String {
        edge_names(&self.names, self.g.edge(id))
    }

    pub fn is_new_vertex(&self, v: VertexId) -> bool {
        self.is_new[v.index()]
    }

    /// V_add in id order.
    pub fn new_vertices(&self) -> &[VertexId] {
        &self.new_vertices
    }

    /// V(H) in spine order.
    pub fn old_order(&self) -> &[VertexId] {
        self.layout_h.spine.order()
    }

    pub fn old_edge_count(&self) -> usize {
        self.h.edge_count()
    }

    /// Edge ids of E_add within G.
    pub fn new_edge_ids(&self) -> Range<EdgeId> {
        self.h.edge_count()..self.g.edge_count()
    }

    /// New edges whose endpoints are both old.
    pub fn new_edges_between_old(&self) -> Vec<EdgeId> {
        self.new_edge_ids()
            .filter(|&id| {
                let (a, b) = self.g.edge(id).endpoints();
                !self.is_new_vertex(a) && !self.is_new_vertex(b)
            })
            .collect()
    }

    pub fn old_edges(&self) -> impl Iterator<Item = (Edge, Page)> + '_ {
        self.h
            .edges()
            .iter()
            .copied()
            .zip(self.layout_h.assignment.pages().iter().copied())
    }

    pub fn n_add(&self) -> usize {
        self.new_vertices.len()
    }

    pub fn m_add(&self) -> usize {
        self.g.edge_count() - self.h.edge_count()
    }

    pub fn kappa(&self) -> usize {
        self.n_add() + self.m_add()
    }

    pub fn is_multigraph(&self) -> bool {
        self.g.has_parallel_edges()
    }

    /// Whether `spine` places all of V(G) and keeps H's order.
    pub fn spine_extends_h(&self, spine: &SpineOrder) -> bool {
        spine.len() == self.g.vertex_count()
            && self.g.vertices().iter().all(|&v| spine.contains(v))
            && self
                .old_order()
                .windows(2)
                .all(|w| spine.rank(w[0]) < spine.rank(w[1]))
    }

    pub(crate) fn require_full_spine(&self, spine: &SpineOrder) -> Result<()> {
        if self.spine_extends_h(spine) {
            Ok(())
        } else {
            Err(Error::Precondition(
                "spine must place every vertex of G and extend the order of H".into(),
            ))
        }
    }

    /// Combines H's pages with `new_pages` (indexed like `new_edge_ids`).
    pub fn layout_with(&self, spine: SpineOrder, new_pages: &[Page]) -> Result<QueueLayout> {
        let mut pages = self.layout_h.assignment.pages().to_vec();
        pages.extend_from_slice(new_pages);
        Ok(QueueLayout::new(spine, PageAssignment::new(pages, self.ell)?))
    }

    /// Whether `layout` is a valid layout of G extending H's layout.
    pub fn is_solution(&self, layout: &QueueLayout) -> Result<bool> {
        Ok(validate_layout(&self.g, layout)?.ok()
            && extends(&self.g, layout, &self.h, &self.layout_h))
    }

    pub(crate) fn certify(&self, layout: QueueLayout, who: &str) -> Result<QueueLayout> {
        if self.is_solution(&layout)? {
            Ok(layout)
        } else {
            Err(Error::Internal(format!("{who} produced an invalid extension")))
        }
    }

    /// Same instance with only the new edges in `keep` (ids of this instance).
    pub fn restrict_new_edges(&self, keep: &[EdgeId]) -> Result<Instance> {
        let new_edges = keep.iter().map(|&id| self.g.edge(id)).collect();
        Instance::new(
            self.ell,
            self.names.clone(),
            self.old_order().to_vec(),
            self.old_edges().collect(),
            new_edges,
            self.is_multigraph(),
        )
    }
}

fn edge_names(names: &[String], e: Edge) -> String {
    let (a, b) = e.endpoints();
    format!("{}--{}", names[a.index()], names[b.index()])
}

/// Name-based construction, mostly for tests and generators.
#[derive(Debug, Default)]
pub struct InstanceBuilder {
    ell: usize,
    names: Vec<String>,
    lookup: HashMap<String, VertexId>,
    spine: Vec<VertexId>,
    old: Vec<(Edge, Page)>,
    new: Vec<Edge>,
    parallel: bool,
    error: Option<String>,
}

impl InstanceBuilder {
    pub fn new(ell: usize) -> Self {
        InstanceBuilder {
            ell,
            ..Default::default()
        }
    }

    fn add(&mut self, name: &str) -> VertexId {
        if let Some(&v) = self.lookup.get(name) {
            self.error
                .get_or_insert_with(|| format!("vertex `{name}` added twice"));
            return v;
        }
        let v = VertexId::from(self.names.len());
        self.names.push(name.to_string());
        self.lookup.insert(name.to_string(), v);
        v
    }

    fn find(&mut self, name: &str) -> VertexId {
        match self.lookup.get(name) {
            Some(&v) => v,
            None => {
                self.error
                    .get_or_insert_with(|| format!("unknown vertex `{name}`"));
                VertexId(0)
            }
        }
    }

    /// Appends old vertices to the spine of H.
    pub fn old_vertices<S: AsRef<str>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        for n in names {
            let v = self.add(n.as_ref());
            self.spine.push(v);
        }
        self
    }

    pub fn new_vertices<S: AsRef<str>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        for n in names {
            self.add(n.as_ref());
        }
        self
    }

    /// Old edge on zero-based page `page`.
    pub fn old_edge(mut self, a: &str, b: &str, page: Page) -> Self {
        let e = Edge::new(self.find(a), self.find(b));
        self.old.push((e, page));
        self
    }

    pub fn new_edge(mut self, a: &str, b: &str) -> Self {
        let e = Edge::new(self.find(a), self.find(b));
        self.new.push(e);
        self
    }

    pub fn allow_parallel(mut self) -> Self {
        self.parallel = true;
        self
    }

    pub fn build(self) -> Result<Instance> {
        if let Some(msg) = self.error {
            return Err(Error::Invalid(msg));
        }
        Instance::new(
            self.ell,
            self.names,
            self.spine,
            self.old,
            self.new,
            self.parallel,
        )
    }
}

/// Admissible pages P(e) and conflicting new edges for a list of new edges
/// under a fixed spine.
#[derive(Clone, Debug)]
pub struct AdmissiblePageTable {
    edges: Vec<Edge>,
    admissible: Vec<PageSet>,
    conflicts: Vec<Vec<usize>>,
}

impl AdmissiblePageTable {
    /// `old` are the edges with fixed pages; table row `i` describes `new[i]`.
    pub fn build(
        spine: &SpineOrder,
        ell: usize,
        old: impl IntoIterator<Item = (Edge, Page)>,
        new: &[Edge],
    ) -> Result<Self> {
        let span = |e: Edge| {
            spine
                .span(e)
                .ok_or_else(|| Error::Precondition(format!("edge {e:?} is not on the spine")))
        };
        let old: Vec<((usize, usize), Page)> = old
            .into_iter()
            .map(|(e, p)| Ok((span(e)?, p)))
            .collect::<Result<_>>()?;
        let spans: Vec<(usize, usize)> = new.iter().map(|&e| span(e)).collect::<Result<_>>()?;
        let admissible = spans
            .iter()
            .map(|&s| {
                let mut pages = PageSet::full(ell);
                for &(o, p) in &old {
                    if spans_nest(s, o) {
                        pages.remove(p);
                    }
                }
                pages
            })
            .collect();
        let mut conflicts = vec![Vec::new(); new.len()];
        for i in 0..new.len() {
            for j in i + 1..new.len() {
                if spans_nest(spans[i], spans[j]) {
                    conflicts[i].push(j);
                    conflicts[j].push(i);
                }
            }
        }
        Ok(AdmissiblePageTable {
            edges: new.to_vec(),
            admissible,
            conflicts,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    pub fn admissible(&self, i: usize) -> &PageSet {
        &self.admissible[i]
    }

    pub fn conflicts(&self, i: usize) -> &[usize] {
        &self.conflicts[i]
    }
}

/// P(e) and conflicts for E_add; row `i` is new edge `inst.new_edge_ids().start + i`.
pub fn admissible_pages(inst: &Instance, spine: &SpineOrder) -> Result<AdmissiblePageTable> {
    inst.require_full_spine(spine)?;
    let new: Vec<Edge> = inst.new_edge_ids().map(|id| inst.g().edge(id)).collect();
    AdmissiblePageTable::build(spine, inst.ell(), inst.old_edges(), &new)
}
