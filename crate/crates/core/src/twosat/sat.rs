use std::ops::Not;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: u32,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: u32) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: u32) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    fn node(self) -> usize {
        2 * self.var as usize + usize::from(!self.positive)
    }

    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var as usize] == self.positive
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }
}

/// Conjunction of two-literal clauses. A unit clause is written `(l, l)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoSatFormula {
    variable_count: usize,
    clauses: Vec<(Lit, Lit)>,
}

impl TwoSatFormula {
    pub fn new(variable_count: usize) -> Self {
        TwoSatFormula {
            variable_count,
            clauses: Vec::new(),
        }
    }

    pub fn from_clauses(variable_count: usize, clauses: Vec<(Lit, Lit)>) -> Result<Self> {
        let mut f = TwoSatFormula::new(variable_count);
        for (a, b) in clauses {
            f.add_clause(a, b)?;
        }
        Ok(f)
    }

    pub fn add_clause(&mut self, a: Lit, b: Lit) -> Result<()> {
        for l in [a, b] {
            if l.var as usize >= self.variable_count {
                return Err(Error::Invalid(format!(
                    "variable {} out of range for {} variables",
                    l.var, self.variable_count
                )));
            }
        }
        self.clauses.push((a, b));
        Ok(())
    }

    pub(crate) fn push(&mut self, a: Lit, b: Lit) {
        debug_assert!((a.var as usize) < self.variable_count);
        debug_assert!((b.var as usize) < self.variable_count);
        self.clauses.push((a, b));
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[(Lit, Lit)] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|&(a, b)| a.holds(assignment) || b.holds(assignment))
    }
}

/// Satisfying assignment via strongly connected components of the
/// implication graph, or `None` if some variable shares a component with
/// its negation.
pub fn solve_2sat(f: &TwoSatFormula) -> Option<Vec<bool>> {
    let n = 2 * f.variable_count;
    let mut start = vec![0usize; n + 1];
    for &(a, b) in &f.clauses {
        start[(!a).node() + 1] += 1;
        start[(!b).node() + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut targets = vec![0usize; start[n]];
    for &(a, b) in &f.clauses {
        targets[fill[(!a).node()]] = b.node();
        fill[(!a).node()] += 1;
        targets[fill[(!b).node()]] = a.node();
        fill[(!b).node()] += 1;
    }
    let comp = tarjan(n, &start, &targets);
    (0..f.variable_count)
        .map(|v| {
            let (t, fl) = (comp[2 * v], comp[2 * v + 1]);
            (t != fl).then_some(t < fl)
        })
        .collect()
}

/// Component ids in order of completion, so sinks get the smallest ids.
fn tarjan(n: usize, start: &[usize], targets: &[usize]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut calls: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut comps = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        calls.push((root, start[root]));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = calls.last_mut() {
            if *next < start[v + 1] {
                let w = targets[*next];
                *next += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, start[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = comps;
                    if w == v {
                        break;
                    }
                }
                comps += 1;
            }
        }
    }
    comp
}
