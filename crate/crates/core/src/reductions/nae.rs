//! Positive NAE-3SAT to DelayBetter with lifetime 2, both orientations.
//!
//! Every edge starts at time 1 and every deadline is 1 or 2, so a delaying
//! is just a choice of which edges move to time 2.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{Delaying, TemporalGraph, VertexId};

use super::{Emitter, ReductionError, ReductionOutput, Source};

/// A positive NAE-3SAT formula: each clause is three variable indices and
/// is satisfied when its variables are not all equal. A clause may repeat
/// a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaeFormula {
    variable_count: usize,
    clauses: Vec<[usize; 3]>,
}

impl NaeFormula {
    pub fn new(variable_count: usize, clauses: Vec<[usize; 3]>) -> Result<Self, ReductionError> {
        for (k, c) in clauses.iter().enumerate() {
            if let Some(x) = c.iter().find(|&&x| x >= variable_count) {
                return Err(ReductionError::InvalidInput(format!(
                    "clauses[{k}] names variable {x} but n = {variable_count}"
                )));
            }
        }
        Ok(Self {
            variable_count,
            clauses,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            let first = assignment[c[0]];
            c.iter().any(|&x| assignment[x] != first)
        })
    }

    /// The distinct variables of clause `k`, in first-occurrence order.
    fn clause_vars(&self, k: usize) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        self.clauses[k].iter().copied().filter(|x| seen.insert(*x)).collect()
    }
}

pub const NAE_VARIABLE_LIMIT: usize = 24;

/// The first satisfying assignment in binary counting order (variable 0 is
/// the lowest bit), or `None`.
pub fn solve_nae3sat_brute(f: &NaeFormula) -> Result<Option<Vec<bool>>, ReductionError> {
    let n = f.variable_count();
    if n > NAE_VARIABLE_LIMIT {
        return Err(ReductionError::TooLarge {
            what: "variable count",
            size: n,
            limit: NAE_VARIABLE_LIMIT,
        });
    }
    let mut assignment = alloc::vec![false; n];
    for mask in 0u32..(1u32 << n) {
        for (x, a) in assignment.iter_mut().enumerate() {
            *a = mask >> x & 1 == 1;
        }
        if f.satisfied_by(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

fn var(x: usize, part: &str) -> String {
    format!("x{x}.{part}")
}

fn clause(k: usize, part: &str) -> String {
    format!("c{k}{part}")
}

/// Undirected construction.
///
/// Hubs `T` and `F` hang off pendant vertices `T′` and `F′`. Each variable
/// has `s_x`, `t_x`, `m_x`, all joined to both hubs; each clause has `c`
/// and a pendant `c′`, and `c` is joined to `m_x` for its variables. The
/// time-1 demands pin `F′F`, `T′T`, `s_xT`, `s_xF` and `cc′` at 1; the rest
/// force `t_x` edges to 2 and exactly one of `m_xT`, `m_xF` to 1, which
/// encodes the value of `x`. Clause demands `(T, c)` and `(F, c)` then
/// need one true and one false variable.
pub fn reduce_nae_to_db_undirected(f: &NaeFormula) -> Result<ReductionOutput, ReductionError> {
    let mut em = Emitter::new(false);
    let g = Source::Global;
    let hub_f = em.vertex("F", "hub", g);
    let pend_f = em.vertex("F'", "hub", g);
    let hub_t = em.vertex("T", "hub", g);
    let pend_t = em.vertex("T'", "hub", g);
    em.edge(hub_f, pend_f, 1, "hub", g);
    em.edge(hub_t, pend_t, 1, "hub", g);
    em.demand(pend_f, hub_f, 1, "hub", g);
    em.demand(pend_t, hub_t, 1, "hub", g);

    let mut m = Vec::with_capacity(f.variable_count());
    for x in 0..f.variable_count() {
        let src = Source::Variable(x);
        let s = em.vertex(var(x, "s"), "variable", src);
        let t = em.vertex(var(x, "t"), "variable", src);
        let mx = em.vertex(var(x, "m"), "variable", src);
        for v in [s, t, mx] {
            em.edge(v, hub_t, 1, "variable", src);
            em.edge(v, hub_f, 1, "variable", src);
        }
        em.demand(s, hub_t, 1, "variable", src);
        em.demand(s, hub_f, 1, "variable", src);
        em.demand(pend_t, t, 2, "variable", src);
        em.demand(pend_f, t, 2, "variable", src);
        em.demand(s, mx, 2, "variable", src);
        em.demand(mx, t, 2, "variable", src);
        m.push(mx);
    }
    for k in 0..f.clauses().len() {
        let src = Source::Clause(k);
        let c = em.vertex(clause(k, ""), "clause", src);
        let cp = em.vertex(clause(k, "'"), "clause", src);
        em.edge(c, cp, 1, "clause", src);
        for x in f.clause_vars(k) {
            em.edge(c, m[x], 1, "clause", src);
        }
        em.demand(c, cp, 1, "clause", src);
        em.demand(hub_t, c, 2, "clause", src);
        em.demand(hub_f, c, 2, "clause", src);
    }
    em.finish(None)
}

fn set(labels: &mut [u64], g: &TemporalGraph, a: &str, b: &str, t: u64) {
    let e = g.find_edge_by_name(a, b).expect("construction edge exists");
    labels[e] = t;
}

/// The yes-direction delaying of the undirected construction for a
/// satisfying assignment.
pub fn nae_undirected_labels(f: &NaeFormula, out: &ReductionOutput, assignment: &[bool]) -> Delaying {
    let g = out.instance.graph();
    let mut labels = g.labels();
    for (x, &value) in assignment.iter().enumerate().take(f.variable_count()) {
        let (t, m) = (var(x, "t"), var(x, "m"));
        set(&mut labels, g, &t, "T", 2);
        set(&mut labels, g, &t, "F", 2);
        let (early, late) = if value { ("T", "F") } else { ("F", "T") };
        set(&mut labels, g, &m, early, 1);
        set(&mut labels, g, &m, late, 2);
    }
    for (k, _) in f.clauses().iter().enumerate() {
        for x in f.clause_vars(k) {
            set(&mut labels, g, &clause(k, ""), &var(x, "m"), 2);
        }
    }
    Delaying::new(labels)
}

/// Directed construction; the footprint is acyclic.
///
/// Per variable, `s_x` is entered from `s_x^T` and `s_x^F` and leaves to
/// `t_x^T` and `t_x^F`, which both lead to `t_x`; `s_x^T → T → t_x^T` and
/// `s_x^F → F → t_x^F` run around it. Clause vertices point at `s_x^T` and
/// `s_x^F` of their variables. All deadlines are 2. A true `x` is the
/// delaying where `s_x^T → T` is at 2 (so clauses reach `T` through it) and
/// `s_x^F → F` at 1; a false `x` is the mirror image.
pub fn reduce_nae_to_db_directed(f: &NaeFormula) -> Result<ReductionOutput, ReductionError> {
    let mut em = Emitter::new(true);
    let g = Source::Global;
    let hub_t = em.vertex("T", "hub", g);
    let hub_f = em.vertex("F", "hub", g);
    let mut entries: Vec<(VertexId, VertexId)> = Vec::with_capacity(f.variable_count());
    for x in 0..f.variable_count() {
        let src = Source::Variable(x);
        let s = em.vertex(var(x, "s"), "variable", src);
        let st = em.vertex(var(x, "sT"), "variable", src);
        let sf = em.vertex(var(x, "sF"), "variable", src);
        let t = em.vertex(var(x, "t"), "variable", src);
        let tt = em.vertex(var(x, "tT"), "variable", src);
        let tf = em.vertex(var(x, "tF"), "variable", src);
        for (a, b) in [
            (st, s),
            (sf, s),
            (s, tt),
            (s, tf),
            (tt, t),
            (tf, t),
            (st, hub_t),
            (hub_t, tt),
            (sf, hub_f),
            (hub_f, tf),
        ] {
            em.edge(a, b, 1, "variable", src);
        }
        em.demand(s, t, 2, "variable", src);
        em.demand(st, tt, 2, "variable", src);
        em.demand(sf, tf, 2, "variable", src);
        entries.push((st, sf));
    }
    for k in 0..f.clauses().len() {
        let src = Source::Clause(k);
        let c = em.vertex(clause(k, ""), "clause", src);
        for x in f.clause_vars(k) {
            let (st, sf) = entries[x];
            em.edge(c, st, 1, "clause", src);
            em.edge(c, sf, 1, "clause", src);
        }
        em.demand(c, hub_t, 2, "clause", src);
        em.demand(c, hub_f, 2, "clause", src);
    }
    em.finish(None)
}

/// The yes-direction delaying of the directed construction.
pub fn nae_directed_labels(f: &NaeFormula, out: &ReductionOutput, assignment: &[bool]) -> Delaying {
    let g = out.instance.graph();
    let mut labels = g.labels();
    for (x, &value) in assignment.iter().enumerate().take(f.variable_count()) {
        // The side named after the value carries the late hub edge.
        let (on, off, hub_on, hub_off) = if value { ("T", "F", "T", "F") } else { ("F", "T", "F", "T") };
        let s = var(x, "s");
        let s_on = var(x, &format!("s{on}"));
        let s_off = var(x, &format!("s{off}"));
        let t_on = var(x, &format!("t{on}"));
        let t_off = var(x, &format!("t{off}"));
        set(&mut labels, g, &s_on, hub_on, 2);
        set(&mut labels, g, &s_on, &s, 1);
        set(&mut labels, g, &s, &t_on, 2);
        set(&mut labels, g, &s, &t_off, 1);
        set(&mut labels, g, &t_off, &var(x, "t"), 2);
        set(&mut labels, g, &s_off, hub_off, 1);
        set(&mut labels, g, hub_off, &t_off, 2);
    }
    for (k, _) in f.clauses().iter().enumerate() {
        for x in f.clause_vars(k) {
            let on = if assignment[x] { "sT" } else { "sF" };
            set(&mut labels, g, &clause(k, ""), &var(x, on), 1);
        }
    }
    Delaying::new(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reach::verify;
    use alloc::vec;

    #[test]
    fn oracle_basics() {
        let f = NaeFormula::new(3, vec![[0, 1, 2]]).unwrap();
        assert!(solve_nae3sat_brute(&f).unwrap().is_some());
        let g = NaeFormula::new(1, vec![[0, 0, 0]]).unwrap();
        assert!(solve_nae3sat_brute(&g).unwrap().is_none());
        let big = NaeFormula::new(25, vec![]).unwrap();
        assert!(solve_nae3sat_brute(&big).is_err());
        assert!(NaeFormula::new(2, vec![[0, 1, 2]]).is_err());
    }

    #[test]
    fn undirected_sizes_and_yes_labels() {
        let f = NaeFormula::new(4, vec![[0, 1, 2], [1, 2, 3]]).unwrap();
        let out = reduce_nae_to_db_undirected(&f).unwrap();
        let (n, m) = (4, 2);
        let g = out.instance.graph();
        assert_eq!(g.vertex_count(), 4 + 3 * n + 2 * m);
        assert_eq!(g.edge_count(), 2 + 6 * n + 4 * m);
        assert_eq!(out.instance.demands().len(), 2 + 6 * n + 3 * m);
        let a = solve_nae3sat_brute(&f).unwrap().unwrap();
        assert!(verify(&out.instance, &nae_undirected_labels(&f, &out, &a)).accepted());
    }

    #[test]
    fn directed_yes_labels() {
        let f = NaeFormula::new(4, vec![[0, 1, 2], [1, 2, 3]]).unwrap();
        let out = reduce_nae_to_db_directed(&f).unwrap();
        let a = solve_nae3sat_brute(&f).unwrap().unwrap();
        assert!(verify(&out.instance, &nae_directed_labels(&f, &out, &a)).accepted());
    }
}
