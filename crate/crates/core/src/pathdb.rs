//! Path-DelayBetter in polynomial time.
//!
//! Every prescribed path contributes "label(f) ≥ label(e) + 1" for each pair
//! of consecutive edges `e ≺ f`, and "label(final edge) ≤ deadline". Together
//! with "label(e) ≥ λ(e)" this is a system of difference constraints whose
//! least solution is reached by one pass over the precedence relation in
//! topological order:
//!
//! ```text
//! t'(e) = max(λ(e), 1 + max{ t'(f) : f ≺ e })
//! ```
//!
//! The least solution is integral and pointwise below every feasible
//! delaying on the constrained edges, so it is feasible iff the instance is,
//! and it maximizes every demand's slack at once.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::model::{Delaying, EdgeId, Instance, NoReason, ProblemKind, SolveResult, TemporalGraph, Time};
use crate::solvers::{Algorithm, SearchStats, SolveError, Solved};

/// The precedence relation over footprint edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceGraph {
    lower: Vec<Time>,
    deadline: Vec<Option<Time>>,
    succ: Vec<BTreeSet<EdgeId>>,
}

impl PrecedenceGraph {
    /// Builds the relation from routes given as edge sequences with deadlines.
    pub fn from_routes<'a, I>(graph: &TemporalGraph, routes: I) -> Self
    where
        I: IntoIterator<Item = (&'a [EdgeId], Time)>,
    {
        let m = graph.edge_count();
        let mut pg = Self {
            lower: graph.labels(),
            deadline: vec![None; m],
            succ: vec![BTreeSet::new(); m],
        };
        for (edges, deadline) in routes {
            for w in edges.windows(2) {
                pg.succ[w[0]].insert(w[1]);
            }
            if let Some(&last) = edges.last() {
                let d = &mut pg.deadline[last];
                *d = Some(d.map_or(deadline, |x| x.min(deadline)));
            }
        }
        pg
    }

    pub fn node_count(&self) -> usize {
        self.lower.len()
    }

    pub fn successors(&self, e: EdgeId) -> impl Iterator<Item = EdgeId> + '_ {
        self.succ[e].iter().copied()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (EdgeId, EdgeId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(e, s)| s.iter().map(move |&f| (e, f)))
    }

    pub fn in_degree(&self, e: EdgeId) -> usize {
        self.succ.iter().filter(|s| s.contains(&e)).count()
    }

    /// Tightest deadline of any demand ending on `e`.
    pub fn deadline(&self, e: EdgeId) -> Option<Time> {
        self.deadline[e]
    }

    pub fn lower_bound(&self, e: EdgeId) -> Time {
        self.lower[e]
    }

    /// Least labels satisfying the lower bounds and every precedence arc,
    /// ignoring deadlines. Fails on a cycle of the relation.
    ///
    /// Nodes are released lexicographically-smallest first, which makes the
    /// processing order (though not the fixed point itself) reproducible.
    pub fn least_fixed_point(&self) -> Result<Vec<Time>, NoReason> {
        let m = self.node_count();
        let mut indeg = vec![0usize; m];
        for (_, f) in self.arcs() {
            indeg[f] += 1;
        }
        let mut ready: BinaryHeap<Reverse<EdgeId>> =
            (0..m).filter(|&e| indeg[e] == 0).map(Reverse).collect();
        let mut label = self.lower.clone();
        let mut done = 0;
        while let Some(Reverse(e)) = ready.pop() {
            done += 1;
            for &f in &self.succ[e] {
                label[f] = label[f].max(label[e] + 1);
                indeg[f] -= 1;
                if indeg[f] == 0 {
                    ready.push(Reverse(f));
                }
            }
        }
        if done < m {
            return Err(NoReason::PrecedenceCycle);
        }
        Ok(label)
    }

    /// The least feasible labels, or why none exist.
    pub fn solve(&self) -> Result<Vec<Time>, NoReason> {
        let label = self.least_fixed_point()?;
        let late = label
            .iter()
            .zip(&self.deadline)
            .any(|(&t, d)| matches!(d, Some(d) if t > *d));
        if late {
            Err(NoReason::DeadlineUnsatisfiable)
        } else {
            Ok(label)
        }
    }
}

/// Least feasible labels for a set of fixed routes over `graph`.
pub fn minimal_labels<'a, I>(graph: &TemporalGraph, routes: I) -> Result<Vec<Time>, NoReason>
where
    I: IntoIterator<Item = (&'a [EdgeId], Time)>,
{
    PrecedenceGraph::from_routes(graph, routes).solve()
}

/// Same as [`minimal_labels`], additionally enforcing `label ≤ λ + δ`.
/// Because the labels are pointwise least, exceeding δ here means no
/// δ-delaying serves these routes.
pub fn minimal_labels_capped<'a, I>(
    graph: &TemporalGraph,
    routes: I,
    delta: Option<Time>,
) -> Result<Vec<Time>, NoReason>
where
    I: IntoIterator<Item = (&'a [EdgeId], Time)>,
{
    let labels = minimal_labels(graph, routes)?;
    if let Some(delta) = delta {
        let over = graph
            .edges()
            .iter()
            .zip(&labels)
            .any(|(e, &t)| t > e.time.saturating_add(delta));
        if over {
            return Err(NoReason::DelayBoundExceeded);
        }
    }
    Ok(labels)
}

/// The precedence graph of a Path-DelayBetter instance.
pub fn build_precedence(instance: &Instance) -> Result<PrecedenceGraph, SolveError> {
    let paths = instance.paths().ok_or(SolveError::Unsupported {
        algorithm: Algorithm::PathDb,
        kind: instance.kind(),
    })?;
    Ok(PrecedenceGraph::from_routes(
        instance.graph(),
        paths
            .iter()
            .zip(instance.demands())
            .map(|(p, d)| (p.edges(), d.deadline)),
    ))
}

/// Decides a Path-DelayBetter instance. The witness is the pointwise-least
/// feasible delaying.
pub fn solve_path_db(instance: &Instance) -> Result<Solved, SolveError> {
    if instance.kind() != ProblemKind::PathDelayBetter {
        return Err(SolveError::Unsupported {
            algorithm: Algorithm::PathDb,
            kind: instance.kind(),
        });
    }
    let pg = build_precedence(instance)?;
    let result = match pg.solve() {
        Ok(labels) => SolveResult::certified(instance, Delaying::new(labels)),
        Err(reason) => SolveResult::No(reason),
    };
    Ok(Solved {
        result,
        algorithm: Algorithm::PathDb,
        stats: SearchStats {
            branches: 1,
            states: pg.node_count() as u64,
        },
    })
}
