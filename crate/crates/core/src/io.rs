//! JSON instance and solution files. Pages are 1-based in files.
//!
//! Edges are keyed `"u--v"` with endpoints in `vertices_g` order; the k-th
//! copy of a parallel edge (k ≥ 2) is keyed `"u--v#k"`.

use std::collections::{BTreeMap, HashMap};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::branch::BranchStats;
use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, VertexId};
use crate::instance::Instance;
use crate::layout::{extends, validate_layout, PageAssignment, QueueLayout, SpineOrder, ValidationReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub ell: usize,
    pub vertices_g: Vec<String>,
    pub edges_g: Vec<[String; 2]>,
    /// Listed in spine order.
    pub vertices_h: Vec<String>,
    pub edges_h: Vec<[String; 2]>,
    pub pages_h: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let key = e.path().to_string();
        Error::parse(key, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| Error::parse(".", e.to_string()))?;
    Ok(value)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types always serialize");
    s.push('\n');
    s
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_instance(inst: &Instance, meta: Option<serde_json::Value>) -> Self {
        let pair = |e: Edge| {
            let (a, b) = e.endpoints();
            [inst.name(a).to_string(), inst.name(b).to_string()]
        };
        InstanceFile {
            ell: inst.ell(),
            vertices_g: inst.names().to_vec(),
            edges_g: inst.g().edges().iter().map(|&e| pair(e)).collect(),
            vertices_h: inst.old_order().iter().map(|&v| inst.name(v).to_string()).collect(),
            edges_h: inst.h().edges().iter().map(|&e| pair(e)).collect(),
            pages_h: inst.layout_h().assignment.pages().iter().map(|p| p + 1).collect(),
            meta,
        }
    }

    /// Builds the instance. New edges are the entries of `edges_g` left over
    /// once every entry of `edges_h` is matched, in `edges_g` order. A layout
    /// of H with nesting pairs is reported as `Error::InvalidLayout`, with
    /// edge ids indexing `edges_h`; every other problem as `Error::Parse`.
    pub fn to_instance(&self) -> Result<Instance> {
        if self.ell == 0 {
            return Err(Error::parse("ell", "must be at least 1"));
        }
        let mut ids = HashMap::with_capacity(self.vertices_g.len());
        for (i, name) in self.vertices_g.iter().enumerate() {
            if ids.insert(name.as_str(), VertexId::from(i)).is_some() {
                return Err(Error::parse(format!("vertices_g[{i}]"), format!("duplicate vertex `{name}`")));
            }
        }
        let mut spine = Vec::with_capacity(self.vertices_h.len());
        let mut in_h = vec![false; self.vertices_g.len()];
        for (i, name) in self.vertices_h.iter().enumerate() {
            let v = *ids
                .get(name.as_str())
                .ok_or_else(|| Error::parse(format!("vertices_h[{i}]"), format!("`{name}` is not in vertices_g")))?;
            if std::mem::replace(&mut in_h[v.index()], true) {
                return Err(Error::parse(format!("vertices_h[{i}]"), format!("duplicate vertex `{name}`")));
            }
            spine.push(v);
        }
        let edge = |key: String, [a, b]: &[String; 2]| -> Result<Edge> {
            let find = |n: &String| {
                ids.get(n.as_str())
                    .copied()
                    .ok_or_else(|| Error::parse(key.clone(), format!("unknown vertex `{n}`")))
            };
            let (a, b) = (find(a)?, find(b)?);
            if a == b {
                return Err(Error::parse(key, "loops are not allowed"));
            }
            Ok(Edge::new(a, b))
        };
        if self.pages_h.len() != self.edges_h.len() {
            return Err(Error::parse(
                "pages_h",
                format!("has {} entries, edges_h has {}", self.pages_h.len(), self.edges_h.len()),
            ));
        }
        let mut old = Vec::with_capacity(self.edges_h.len());
        let mut unmatched: HashMap<Edge, usize> = HashMap::new();
        for (i, (pair, &page)) in self.edges_h.iter().zip(&self.pages_h).enumerate() {
            let e = edge(format!("edges_h[{i}]"), pair)?;
            let (a, b) = e.endpoints();
            if !in_h[a.index()] || !in_h[b.index()] {
                return Err(Error::parse(format!("edges_h[{i}]"), "endpoint is not in vertices_h"));
            }
            if page == 0 || page > self.ell {
                return Err(Error::parse(format!("pages_h[{i}]"), format!("page {page} is outside 1..={}", self.ell)));
            }
            *unmatched.entry(e).or_default() += 1;
            old.push((e, page - 1));
        }
        let parallel = unmatched.values().any(|&c| c > 1);
        let mut new = Vec::new();
        for (i, pair) in self.edges_g.iter().enumerate() {
            let e = edge(format!("edges_g[{i}]"), pair)?;
            match unmatched.get_mut(&e) {
                Some(c) if *c > 0 => *c -= 1,
                _ => new.push(e),
            }
        }
        if let Some((i, _)) = self
            .edges_h
            .iter()
            .enumerate()
            .find(|(_, pair)| edge(String::new(), pair).is_ok_and(|e| unmatched[&e] > 0))
        {
            return Err(Error::parse(format!("edges_h[{i}]"), "edge of H is missing from edges_g"));
        }
        Instance::new(self.ell, self.vertices_g.clone(), spine, old, new, parallel).map_err(|e| match e {
            invalid @ Error::InvalidLayout(_) => invalid,
            other => Error::parse("edges_g", other.to_string()),
        })
    }

    /// Nesting pairs of a report on H's layout, by `edges_h` entry.
    pub fn describe_h_violations(&self, report: &ValidationReport) -> Vec<String> {
        report
            .violations
            .iter()
            .map(|&(a, b)| format!("{} nests with {}", label(&self.edges_h[a]), label(&self.edges_h[b])))
            .collect()
    }
}

fn label([a, b]: &[String; 2]) -> String {
    format!("{a}--{b}")
}

/// File key of every edge of G, by edge id.
pub fn edge_keys(inst: &Instance) -> Vec<String> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    (0..inst.g().edge_count())
        .map(|id| {
            let base = inst.edge_label(id);
            let copy = seen.entry(base.clone()).or_default();
            *copy += 1;
            if *copy == 1 {
                base
            } else {
                format!("{base}#{copy}")
            }
        })
        .collect()
}

/// Human-readable nesting pairs of a validation report.
pub fn describe_violations(inst: &Instance, report: &ValidationReport) -> Vec<String> {
    let keys = edge_keys(inst);
    report
        .violations
        .iter()
        .map(|&(a, b)| format!("{} nests with {}", keys[a], keys[b]))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionStats {
    pub explored: u64,
    pub pruned: u64,
    pub solutions_found: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl SolutionStats {
    pub fn new(stats: BranchStats, wall_ms: Option<f64>) -> Self {
        SolutionStats {
            explored: stats.explored,
            pruned: stats.pruned,
            solutions_found: stats.solutions_found,
            wall_ms: wall_ms.map(|ms| (ms * 1e3).round() / 1e3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub spine: Vec<String>,
    /// Edge key to 1-based page.
    pub pages: BTreeMap<String, usize>,
    pub algorithm: String,
    pub stats: SolutionStats,
}

impl SolutionFile {
    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_layout(inst: &Instance, layout: &QueueLayout, algorithm: &str, stats: SolutionStats) -> Self {
        let pages = edge_keys(inst)
            .into_iter()
            .zip(layout.assignment.pages())
            .map(|(k, &p)| (k, p + 1))
            .collect();
        SolutionFile {
            spine: layout.spine.order().iter().map(|&v| inst.name(v).to_string()).collect(),
            pages,
            algorithm: algorithm.to_string(),
            stats,
        }
    }

    /// The layout described by the file, checked only for shape: every
    /// vertex once on the spine and every edge given exactly one page.
    /// Keys may name the endpoints in either order.
    pub fn to_layout(&self, inst: &Instance) -> Result<QueueLayout> {
        let mut order = Vec::with_capacity(self.spine.len());
        for (i, name) in self.spine.iter().enumerate() {
            let v = inst
                .vertex(name)
                .ok_or_else(|| Error::parse(format!("spine[{i}]"), format!("unknown vertex `{name}`")))?;
            order.push(v);
        }
        let spine = SpineOrder::new(order).map_err(|e| Error::parse("spine", e.to_string()))?;
        if spine.len() != inst.g().vertex_count() {
            return Err(Error::parse(
                "spine",
                format!("lists {} vertices, G has {}", spine.len(), inst.g().vertex_count()),
            ));
        }
        let keys = edge_keys(inst);
        let mut lookup: HashMap<String, EdgeId> = HashMap::with_capacity(2 * keys.len());
        for (id, key) in keys.iter().enumerate() {
            lookup.insert(key.clone(), id);
            lookup.insert(swap_key(inst, id, key), id);
        }
        let mut pages = vec![None; keys.len()];
        for (key, &page) in &self.pages {
            let path = format!("pages.{key}");
            let &id = lookup
                .get(key)
                .ok_or_else(|| Error::parse(path.clone(), "not an edge of G"))?;
            if page == 0 || page > inst.ell() {
                return Err(Error::parse(path, format!("page {page} is outside 1..={}", inst.ell())));
            }
            if pages[id].replace(page - 1).is_some() {
                return Err(Error::parse(path, format!("edge {} given twice", keys[id])));
            }
        }
        let pages = pages
            .into_iter()
            .enumerate()
            .map(|(id, p)| p.ok_or_else(|| Error::parse("pages", format!("edge {} has no page", keys[id]))))
            .collect::<Result<Vec<_>>>()?;
        Ok(QueueLayout::new(spine, PageAssignment::new(pages, inst.ell())?))
    }

    /// The layout, required to be a valid extension of H's layout.
    pub fn load_against(&self, inst: &Instance) -> Result<QueueLayout> {
        let layout = self.to_layout(inst)?;
        let report = validate_layout(inst.g(), &layout)?;
        if !report.ok() {
            return Err(Error::InvalidLayout(report));
        }
        if !extends(inst.g(), &layout, inst.h(), inst.layout_h()) {
            return Err(Error::Invalid("solution does not extend the layout of H".into()));
        }
        Ok(layout)
    }
}

fn swap_key(inst: &Instance, id: EdgeId, key: &str) -> String {
    let (a, b) = inst.g().edge(id).endpoints();
    let suffix = key.rfind('#').filter(|_| key != inst.edge_label(id)).map_or("", |i| &key[i..]);
    format!("{}--{}{}", inst.name(b), inst.name(a), suffix)
}
