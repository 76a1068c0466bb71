//! Seeded random instances built by deleting parts of a laid-out graph.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fixed_order::fixed_order_min_pages;
use crate::graph::{Edge, Graph, VertexId};
use crate::instance::Instance;
use crate::layout::{Page, SpineOrder};

/// How much of G to strip to obtain H. Counts beyond what is available are
/// clamped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DeletionPolicy {
    /// Vertices removed, with all their edges.
    pub vertices: usize,
    /// Further edges removed between surviving vertices.
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomGenConfig {
    pub vertex_count: usize,
    pub edge_probability: f64,
    pub page_count: usize,
    pub deletion: DeletionPolicy,
    /// Replace H's inherited layout by an independent random one, which may
    /// no longer extend to G.
    pub scramble_h: bool,
    pub seed: u64,
}

impl Default for RandomGenConfig {
    fn default() -> Self {
        RandomGenConfig {
            vertex_count: 6,
            edge_probability: 0.4,
            page_count: 2,
            deletion: DeletionPolicy {
                vertices: 1,
                edges: 1,
            },
            scramble_h: false,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub instance: Instance,
    /// True when H's layout is the restriction of a layout of G, so the
    /// instance is solvable.
    pub known_solvable: bool,
}

const SPINE_ATTEMPTS: usize = 32;

pub fn gen_random(cfg: &RandomGenConfig) -> Result<GeneratedInstance> {
    if !(0.0..=1.0).contains(&cfg.edge_probability) {
        return Err(Error::Invalid("edge probability must lie in [0, 1]".into()));
    }
    if cfg.page_count == 0 {
        return Err(Error::Invalid("page count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.vertex_count;
    let vertices: Vec<VertexId> = (0..n).map(VertexId::from).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(cfg.edge_probability) {
                edges.push(Edge::new(vertices[i], vertices[j]));
            }
        }
    }
    let g = Graph::new(vertices.clone(), edges.clone())?;
    let (spine, pages) = random_layout(&g, cfg.page_count, &mut rng)?;

    let removed_count = cfg.deletion.vertices.min(n);
    let mut removed = vec![false; n];
    for i in index::sample(&mut rng, n, removed_count) {
        removed[i] = true;
    }
    let inner: Vec<usize> = (0..edges.len())
        .filter(|&i| {
            let (a, b) = edges[i].endpoints();
            !removed[a.index()] && !removed[b.index()]
        })
        .collect();
    let dropped_count = cfg.deletion.edges.min(inner.len());
    let mut dropped = vec![false; edges.len()];
    for k in index::sample(&mut rng, inner.len(), dropped_count) {
        dropped[inner[k]] = true;
    }

    let mut h_spine: Vec<VertexId> = spine
        .order()
        .iter()
        .copied()
        .filter(|v| !removed[v.index()])
        .collect();
    let mut old_edges: Vec<(Edge, Page)> = Vec::new();
    let mut new_edges = Vec::new();
    for (i, &e) in edges.iter().enumerate() {
        let (a, b) = e.endpoints();
        if removed[a.index()] || removed[b.index()] || dropped[i] {
            new_edges.push(e);
        } else {
            old_edges.push((e, pages[i]));
        }
    }
    let mut known_solvable = true;
    if cfg.scramble_h {
        let h_edges: Vec<Edge> = old_edges.iter().map(|&(e, _)| e).collect();
        let h = Graph::new(h_spine.clone(), h_edges.clone())?;
        let (h_order, h_pages) = random_layout(&h, cfg.page_count, &mut rng)?;
        h_spine = h_order.order().to_vec();
        old_edges = h_edges.into_iter().zip(h_pages).collect();
        known_solvable = false;
    }
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let instance = Instance::new(cfg.page_count, names, h_spine, old_edges, new_edges, false)?;
    Ok(GeneratedInstance {
        instance,
        known_solvable,
    })
}

/// A random spine on which `g` fits in `page_count` pages, with pages
/// relabelled at random. Pages are indexed like `g.edges()`.
fn random_layout(g: &Graph, page_count: usize, rng: &mut ChaCha8Rng) -> Result<(SpineOrder, Vec<Page>)> {
    for _ in 0..SPINE_ATTEMPTS {
        let mut order = g.vertices().to_vec();
        order.shuffle(rng);
        let spine = SpineOrder::new(order)?;
        let (needed, layout) = fixed_order_min_pages(g, &spine)?;
        if needed <= page_count {
            let mut relabel: Vec<Page> = (0..page_count).collect();
            relabel.shuffle(rng);
            let pages = layout
                .assignment
                .pages()
                .iter()
                .map(|&p| relabel[p])
                .collect();
            return Ok((spine, pages));
        }
    }
    Err(Error::Generation(format!(
        "no random spine out of {SPINE_ATTEMPTS} fits the graph in {page_count} pages"
    )))
}
