//! Encoding of "find a spine for a fixed page assignment and a fixed order
//! of the new-edge endpoints" as 2-SAT.
//!
//! Only pairs (new vertex, old vertex) whose order is not already fixed get
//! a variable; every other pair of vertices has a known order and enters the
//! clauses as a constant. The clauses say that
//! * consecutive new vertices in the endpoint order stay ordered relative to
//!   every old vertex,
//! * each new vertex respects the order of consecutive old vertices, and
//! * no two edges on one page nest.

use crate::error::{Error, Result};
use crate::graph::{Edge, VertexId};
use crate::instance::Instance;
use crate::layout::{spans_nest, PageAssignment, SpineOrder};

use super::sat::{Lit, TwoSatFormula};

/// Fixed relative order of the endpoints of new edges.
///
/// It must contain every new vertex that has a new edge. Old vertices are
/// optional: each one listed pins the new vertices relative to it, the rest
/// are left to the solver. Listed old vertices must follow H's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndpointOrder {
    order: Vec<VertexId>,
}

impl EndpointOrder {
    pub fn new(order: Vec<VertexId>) -> Self {
        EndpointOrder { order }
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }
}

const NONE: u32 = u32::MAX;

/// Truth value of "a precedes b".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rel {
    Const(bool),
    Lit(Lit),
}

impl Rel {
    fn not(self) -> Rel {
        match self {
            Rel::Const(c) => Rel::Const(!c),
            Rel::Lit(l) => Rel::Lit(!l),
        }
    }

    fn eval(self, assignment: &[bool]) -> bool {
        match self {
            Rel::Const(c) => c,
            Rel::Lit(l) => l.holds(assignment),
        }
    }
}

/// Variables for the free (new, old) pairs. Variable `x` is true iff its
/// new vertex precedes its old vertex.
#[derive(Clone, Debug)]
pub struct OrderVariableMap {
    old_count: usize,
    old_rank: Vec<u32>,
    eo_pos: Vec<u32>,
    new_order: Vec<VertexId>,
    new_index: Vec<u32>,
    vars: Vec<u32>,
    variable_count: usize,
}

impl OrderVariableMap {
    fn build(inst: &Instance, eo: &EndpointOrder) -> Result<Self> {
        let n = inst.g().vertex_count();
        let old_count = inst.old_order().len();
        let mut old_rank = vec![NONE; n];
        for (r, &v) in inst.old_order().iter().enumerate() {
            old_rank[v.index()] = r as u32;
        }
        let mut endpoint = vec![false; n];
        let mut needs_order = vec![false; n];
        for id in inst.new_edge_ids() {
            let (a, b) = inst.g().edge(id).endpoints();
            for v in [a, b] {
                endpoint[v.index()] = true;
                needs_order[v.index()] = inst.is_new_vertex(v);
            }
        }
        let mut eo_pos = vec![NONE; n];
        let mut new_order = Vec::new();
        let mut last_old = None;
        for (i, &v) in eo.order().iter().enumerate() {
            if v.index() >= n {
                return Err(Error::Invalid(format!("endpoint order names unknown vertex {v}")));
            }
            if eo_pos[v.index()] != NONE {
                return Err(Error::Invalid(format!("endpoint order repeats {}", inst.name(v))));
            }
            eo_pos[v.index()] = i as u32;
            if inst.is_new_vertex(v) {
                new_order.push(v);
            } else {
                if !endpoint[v.index()] {
                    return Err(Error::Invalid(format!(
                        "{} is not an endpoint of a new edge",
                        inst.name(v)
                    )));
                }
                let r = old_rank[v.index()];
                if last_old.is_some_and(|l| l > r) {
                    return Err(Error::Invalid(
                        "endpoint order contradicts the spine of H".into(),
                    ));
                }
                last_old = Some(r);
            }
        }
        if let Some(i) = (0..n).find(|&i| needs_order[i] && eo_pos[i] == NONE) {
            return Err(Error::Invalid(format!(
                "endpoint order misses {}",
                inst.names()[i]
            )));
        }
        let mut new_index = vec![NONE; n];
        let mut vars = vec![NONE; new_order.len() * old_count];
        let mut next = 0u32;
        for (k, &u) in new_order.iter().enumerate() {
            new_index[u.index()] = k as u32;
            for (r, &w) in inst.old_order().iter().enumerate() {
                if eo_pos[w.index()] == NONE {
                    vars[k * old_count + r] = next;
                    next += 1;
                }
            }
        }
        Ok(OrderVariableMap {
            old_count,
            old_rank,
            eo_pos,
            new_order,
            new_index,
            vars,
            variable_count: next as usize,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    /// Variable for "`new` precedes `old`", if that order is not fixed.
    pub fn variable(&self, new: VertexId, old: VertexId) -> Option<u32> {
        let k = *self.new_index.get(new.index())?;
        let r = *self.old_rank.get(old.index())?;
        if k == NONE || r == NONE {
            return None;
        }
        let v = self.vars[k as usize * self.old_count + r as usize];
        (v != NONE).then_some(v)
    }

    /// New vertices in endpoint order.
    pub fn new_order(&self) -> &[VertexId] {
        &self.new_order
    }

    fn before(&self, a: VertexId, b: VertexId) -> Rel {
        let (ra, rb) = (self.old_rank[a.index()], self.old_rank[b.index()]);
        if ra != NONE && rb != NONE {
            return Rel::Const(ra < rb);
        }
        let (pa, pb) = (self.eo_pos[a.index()], self.eo_pos[b.index()]);
        if pa != NONE && pb != NONE {
            return Rel::Const(pa < pb);
        }
        match (self.variable(a, b), self.variable(b, a)) {
            (Some(x), _) => Rel::Lit(Lit::pos(x)),
            (_, Some(x)) => Rel::Lit(Lit::neg(x)),
            _ => panic!("order of {a} and {b} is neither fixed nor free"),
        }
    }
}

/// A formula together with the meaning of its variables.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub formula: TwoSatFormula,
    pub vars: OrderVariableMap,
}

struct ClauseSink {
    formula: TwoSatFormula,
}

impl ClauseSink {
    /// Adds `a ∨ b`; false if it is falsified by constants alone.
    fn add(&mut self, a: Rel, b: Rel) -> bool {
        match (a, b) {
            (Rel::Const(true), _) | (_, Rel::Const(true)) => true,
            (Rel::Const(false), Rel::Const(false)) => false,
            (Rel::Const(false), Rel::Lit(l)) | (Rel::Lit(l), Rel::Const(false)) => {
                self.formula.push(l, l);
                true
            }
            (Rel::Lit(x), Rel::Lit(y)) => {
                self.formula.push(x, y);
                true
            }
        }
    }
}

/// Encodes the instance under a full page assignment `sigma` of E(G) and an
/// endpoint order. `None` means the constants alone already force a
/// same-page nesting.
pub fn encode_instance(
    inst: &Instance,
    sigma: &PageAssignment,
    eo: &EndpointOrder,
) -> Result<Option<Encoding>> {
    if sigma.len() != inst.g().edge_count() || sigma.page_count() != inst.ell() {
        return Err(Error::Invalid(
            "page assignment must cover every edge of G with the instance's page count".into(),
        ));
    }
    if (0..inst.old_edge_count()).any(|id| sigma.page(id) != inst.layout_h().assignment.page(id)) {
        return Err(Error::Invalid("page assignment moves an edge of H".into()));
    }
    let vars = OrderVariableMap::build(inst, eo)?;
    let mut sink = ClauseSink {
        formula: TwoSatFormula::new(vars.variable_count),
    };
    let old = inst.old_order();
    for pair in vars.new_order.windows(2) {
        for &w in old {
            if vars.eo_pos[w.index()] == NONE {
                sink.add(vars.before(pair[1], w).not(), vars.before(pair[0], w));
            }
        }
    }
    for &u in &vars.new_order {
        for pair in old.windows(2) {
            if !sink.add(vars.before(u, pair[0]).not(), vars.before(u, pair[1])) {
                return Err(Error::Internal("endpoint order inconsistent with H".into()));
            }
        }
    }
    let mut by_page = vec![Vec::new(); inst.ell()];
    for (id, &e) in inst.g().edges().iter().enumerate() {
        by_page[sigma.page(id)].push((id, e));
    }
    let first_new = inst.old_edge_count();
    for edges in &by_page {
        for (i, &(id, e)) in edges.iter().enumerate() {
            for &(other_id, f) in &edges[i + 1..] {
                if (id < first_new && other_id < first_new) || e.shares_endpoint(f) {
                    continue;
                }
                if !forbid_nesting(&vars, &mut sink, e, f)? {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(Encoding {
        formula: sink.formula,
        vars,
    }))
}

/// Adds clauses that keep `e` and `f` from nesting. False if they must nest.
fn forbid_nesting(
    vars: &OrderVariableMap,
    sink: &mut ClauseSink,
    e: Edge,
    f: Edge,
) -> Result<bool> {
    let (a, b) = e.endpoints();
    let (c, d) = f.endpoints();
    if let (Rel::Const(ab), Rel::Const(cd)) = (vars.before(a, b), vars.before(c, d)) {
        let (l1, r1) = if ab { (a, b) } else { (b, a) };
        let (l2, r2) = if cd { (c, d) } else { (d, c) };
        // Two edges with known left ends do not nest iff their left ends
        // and right ends come in the same order.
        let left = vars.before(l1, l2);
        let right = vars.before(r1, r2);
        return Ok(sink.add(left.not(), right) && sink.add(left, right.not()));
    }
    local_clauses(vars, sink, [a, b, c, d])
}

/// Derives the clauses for one edge pair by enumerating the orders of its
/// four endpoints that agree with the constants.
fn local_clauses(
    vars: &OrderVariableMap,
    sink: &mut ClauseSink,
    pts: [VertexId; 4],
) -> Result<bool> {
    let mut rel = [[Rel::Const(false); 4]; 4];
    let mut local: Vec<u32> = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let r = vars.before(pts[i], pts[j]);
            if let Rel::Lit(l) = r {
                if !local.contains(&l.var) {
                    local.push(l.var);
                }
            }
            rel[i][j] = r;
            rel[j][i] = r.not();
        }
    }
    let bit = |var: u32| local.iter().position(|&x| x == var).unwrap();
    let mut allowed: Vec<u32> = Vec::new();
    let mut forbidden: Vec<u32> = Vec::new();
    let mut pos = [0usize, 1, 2, 3];
    loop {
        // pos[i] is the position of point i in this candidate order.
        let mut mask = 0u32;
        let mut consistent = true;
        'pairs: for i in 0..4 {
            for j in i + 1..4 {
                let before = pos[i] < pos[j];
                match rel[i][j] {
                    Rel::Const(c) if c != before => {
                        consistent = false;
                        break 'pairs;
                    }
                    Rel::Const(_) => {}
                    Rel::Lit(l) => {
                        if before == l.positive {
                            mask |= 1 << bit(l.var);
                        }
                    }
                }
            }
        }
        if consistent {
            let s1 = (pos[0].min(pos[1]), pos[0].max(pos[1]));
            let s2 = (pos[2].min(pos[3]), pos[2].max(pos[3]));
            let bucket = if spans_nest(s1, s2) {
                &mut forbidden
            } else {
                &mut allowed
            };
            if !bucket.contains(&mask) {
                bucket.push(mask);
            }
        }
        if !crate::branch::next_permutation(&mut pos) {
            break;
        }
    }
    if allowed.is_empty() {
        return Ok(false);
    }
    if forbidden.is_empty() {
        return Ok(true);
    }
    let k = local.len();
    let value = |mask: u32, v: usize, s: bool| (mask >> v & 1 == 1) == s;
    let mut clauses: Vec<((usize, bool), (usize, bool))> = Vec::new();
    for v in 0..k {
        for s in [false, true] {
            if allowed.iter().all(|&a| value(a, v, s)) && forbidden.iter().any(|&f| !value(f, v, s))
            {
                clauses.push(((v, s), (v, s)));
            }
        }
    }
    for v in 0..k {
        for w in v + 1..k {
            for s in [false, true] {
                for t in [false, true] {
                    let implied_by_unit = clauses
                        .iter()
                        .any(|&(x, y)| x == y && (x == (v, s) || x == (w, t)));
                    if implied_by_unit {
                        continue;
                    }
                    let holds = |m: u32| value(m, v, s) || value(m, w, t);
                    if allowed.iter().all(|&a| holds(a)) && forbidden.iter().any(|&f| !holds(f)) {
                        clauses.push(((v, s), (w, t)));
                    }
                }
            }
        }
    }
    let excluded = |m: u32| {
        clauses
            .iter()
            .any(|&((v, s), (w, t))| !value(m, v, s) && !value(m, w, t))
    };
    if !forbidden.iter().all(|&f| excluded(f)) {
        return Err(Error::Internal(
            "nesting constraint of an edge pair is not expressible in 2-CNF".into(),
        ));
    }
    let lit = |(v, s): (usize, bool)| Lit {
        var: local[v],
        positive: s,
    };
    for (x, y) in clauses {
        sink.formula.push(lit(x), lit(y));
    }
    Ok(true)
}

/// Spine described by a satisfying assignment. New vertices without new
/// edges that the endpoint order leaves out go to the front.
pub fn decode_spine(inst: &Instance, vars: &OrderVariableMap, assignment: &[bool]) -> Result<SpineOrder> {
    if assignment.len() != vars.variable_count {
        return Err(Error::Invalid("assignment size does not match the encoding".into()));
    }
    let old = inst.old_order();
    let mut groups: Vec<Vec<VertexId>> = vec![Vec::new(); old.len() + 1];
    for &v in inst.new_vertices() {
        if vars.eo_pos[v.index()] == NONE {
            groups[0].push(v);
        }
    }
    let mut last_gap = 0;
    for &u in &vars.new_order {
        let ahead: Vec<bool> = old
            .iter()
            .map(|&w| vars.before(u, w).eval(assignment))
            .collect();
        let gap = ahead.iter().position(|&b| b).unwrap_or(old.len());
        if ahead[gap..].iter().any(|&b| !b) {
            return Err(Error::Internal(format!(
                "assignment places {} inconsistently among old vertices",
                inst.name(u)
            )));
        }
        if gap < last_gap {
            return Err(Error::Internal("assignment contradicts the endpoint order".into()));
        }
        last_gap = gap;
        groups[gap].push(u);
    }
    let mut order = Vec::with_capacity(inst.g().vertex_count());
    for (gap, group) in groups.into_iter().enumerate() {
        order.extend(group);
        if let Some(&w) = old.get(gap) {
            order.push(w);
        }
    }
    let spine = SpineOrder::new(order)?;
    let mut last = None;
    let mut listed: Vec<(u32, VertexId)> = vars
        .eo_pos
        .iter()
        .enumerate()
        .filter(|&(_, &p)| p != NONE)
        .map(|(i, &p)| (p, VertexId::from(i)))
        .collect();
    listed.sort_unstable();
    for (_, v) in listed {
        let r = spine.rank(v);
        if last.is_some_and(|l| l > r) {
            return Err(Error::Internal("decoded spine breaks the endpoint order".into()));
        }
        last = Some(r);
    }
    Ok(spine)
}
