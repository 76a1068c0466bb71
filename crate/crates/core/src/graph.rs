use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Dense vertex index. Names live with whoever owns the id space
/// (an [`Instance`](crate::Instance), a reduction, ...).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Position of an edge in its graph's edge list.
pub type EdgeId = usize;

/// Undirected edge stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`; `v` must be an endpoint.
    pub fn other(self, v: VertexId) -> VertexId {
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn shares_endpoint(self, other: Edge) -> bool {
        self.contains(other.lo) || self.contains(other.hi)
    }

    pub fn is_loop(self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    member: Vec<bool>,
    parallel: bool,
}

impl Graph {
    /// Simple graph; rejects loops, duplicate vertices and duplicate edges.
    pub fn new(vertices: Vec<VertexId>, edges: Vec<Edge>) -> Result<Self> {
        Self::build(vertices, edges, false)
    }

    /// Like [`Graph::new`] but keeps parallel edges. Only the reduction's
    /// multi-edge form needs this.
    pub fn with_parallel_edges(vertices: Vec<VertexId>, edges: Vec<Edge>) -> Result<Self> {
        Self::build(vertices, edges, true)
    }

    fn build(vertices: Vec<VertexId>, edges: Vec<Edge>, allow_parallel: bool) -> Result<Self> {
        let universe = vertices.iter().map(|v| v.index() + 1).max().unwrap_or(0);
        let mut member = vec![false; universe];
        for &v in &vertices {
            if std::mem::replace(&mut member[v.index()], true) {
                return Err(Error::Structure(format!("duplicate vertex {v}")));
            }
        }
        let mut seen = HashSet::new();
        let mut parallel = false;
        for &e in &edges {
            let (a, b) = e.endpoints();
            if e.is_loop() {
                return Err(Error::Structure(format!("self-loop at {a}")));
            }
            for x in [a, b] {
                if !member.get(x.index()).copied().unwrap_or(false) {
                    return Err(Error::Structure(format!("edge endpoint {x} is not a vertex")));
                }
            }
            if !seen.insert(e) {
                if !allow_parallel {
                    return Err(Error::Structure(format!("duplicate edge {a}-{b}")));
                }
                parallel = true;
            }
        }
        Ok(Graph {
            vertices,
            edges,
            member,
            parallel,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.member.get(v.index()).copied().unwrap_or(false)
    }

    pub fn has_parallel_edges(&self) -> bool {
        self.parallel
    }
}
