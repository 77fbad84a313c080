//! The feedback-edge-set engine.
//!
//! Fix an order on the feedback edges `E′` and, per demand, which of them
//! the route uses and in which direction. Between consecutive chosen edges
//! the route can only follow the spanning forest, so every choice pins down
//! at most one footprint route per demand and the rest is Path-DB.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Delaying, EdgeId, Instance, NoReason, ProblemKind, SolveResult, TemporalGraph, Time, VertexId};
use crate::pathdb::minimal_labels_capped;
use crate::reach::statically_reachable;

use super::forest::{split_forest, SpanningForest};
use super::{Algorithm, SearchStats, SolveError, SolverConfig, Solved};

/// A minimum feedback edge set of the footprint, orientations ignored.
#[derive(Debug, Clone)]
pub struct FeedbackEdgeSet {
    pub edges: Vec<EdgeId>,
    pub spanning_forest: Vec<EdgeId>,
}

impl FeedbackEdgeSet {
    pub fn rho(&self) -> usize {
        self.edges.len()
    }
}

pub fn compute_fes(graph: &TemporalGraph) -> FeedbackEdgeSet {
    let (spanning_forest, edges) = split_forest(graph);
    FeedbackEdgeSet {
        edges,
        spanning_forest,
    }
}

/// Choices per feedback edge and demand: skip or use (directed), skip or
/// use in either direction (undirected).
fn choices(graph: &TemporalGraph) -> u64 {
    if graph.is_directed() {
        2
    } else {
        3
    }
}

/// `ρ! · k^(ρ·|D|)`, saturating.
pub fn fes_branch_bound(graph: &TemporalGraph, rho: usize, demands: usize) -> u64 {
    let fact = (1..=rho as u64).fold(1u64, |a, x| a.saturating_mul(x));
    let exp = (rho as u64).saturating_mul(demands as u64);
    let pow = u32::try_from(exp)
        .ok()
        .and_then(|e| choices(graph).checked_pow(e))
        .unwrap_or(u64::MAX);
    fact.saturating_mul(pow)
}

/// The `index`-th permutation of `0..n` in lexicographic order.
fn nth_permutation(n: usize, mut index: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact: Vec<u64> = vec![1; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i as u64;
    }
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let q = (index / fact[k]) as usize;
        index %= fact[k];
        out.push(pool.remove(q));
    }
    out
}

/// What one ordering of `E′` contributed to the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingOutcome {
    pub labels: Option<Vec<Time>>,
    pub stats: SearchStats,
    /// First reason a branch failed, in search order.
    pub failure: Option<NoReason>,
}

/// A prepared FES search whose orderings can be explored independently.
#[derive(Debug, Clone)]
pub struct FesSearch<'a> {
    instance: &'a Instance,
    fes: FeedbackEdgeSet,
    forest: SpanningForest,
    orderings: u64,
    /// A demand with no static route at all, found up front.
    blocked: Option<NoReason>,
}

impl<'a> FesSearch<'a> {
    pub fn new(instance: &'a Instance, config: &SolverConfig) -> Result<Self, SolveError> {
        if instance.kind() == ProblemKind::PathDelayBetter {
            return Err(SolveError::Unsupported {
                algorithm: Algorithm::Fes,
                kind: instance.kind(),
            });
        }
        let graph = instance.graph();
        let fes = compute_fes(graph);
        let bound = fes_branch_bound(graph, fes.rho(), instance.demands().len());
        if bound > config.branch_budget {
            return Err(SolveError::BudgetExceeded {
                algorithm: Algorithm::Fes,
                what: "branches",
                budget: config.branch_budget,
            });
        }
        let forest = SpanningForest::new(graph, &fes.spanning_forest);
        let orderings = (1..=fes.rho() as u64).product();
        let blocked = instance.demands().iter().find_map(|d| {
            if statically_reachable(graph, d.source, d.target) {
                None
            } else if forest.connected(d.source, d.target) {
                Some(NoReason::OrientationBlocked)
            } else {
                Some(NoReason::StaticallyUnreachable)
            }
        });
        Ok(Self {
            instance,
            fes,
            forest,
            orderings,
            blocked,
        })
    }

    pub fn feedback_edges(&self) -> &FeedbackEdgeSet {
        &self.fes
    }

    pub fn ordering_count(&self) -> u64 {
        if self.blocked.is_some() {
            0
        } else {
            self.orderings
        }
    }

    /// The route a selection implies, or `None` if it is not a simple path
    /// in the footprint. `chosen` lists (edge, entry vertex, exit vertex).
    fn stitch(&self, s: VertexId, t: VertexId, chosen: &[(EdgeId, VertexId, VertexId)]) -> Option<Vec<EdgeId>> {
        let mut vertices = vec![s];
        let mut edges = Vec::new();
        let mut at = s;
        for &(e, a, b) in chosen {
            self.leg(at, a, &mut vertices, &mut edges)?;
            vertices.push(b);
            edges.push(e);
            at = b;
        }
        self.leg(at, t, &mut vertices, &mut edges)?;
        let mut seen = vertices.clone();
        seen.sort_unstable();
        seen.dedup();
        (seen.len() == vertices.len()).then_some(edges)
    }

    /// Appends the forest path `from -> to`, failing against orientation.
    fn leg(&self, from: VertexId, to: VertexId, vertices: &mut Vec<VertexId>, edges: &mut Vec<EdgeId>) -> Option<()> {
        let graph = self.instance.graph();
        let (vs, es) = self.forest.path(from, to)?;
        for (w, &e) in vs.windows(2).zip(&es) {
            if graph.is_directed() && graph.edge(e).u != w[0] {
                return None;
            }
        }
        vertices.extend_from_slice(&vs[1..]);
        edges.extend_from_slice(&es);
        Some(())
    }

    /// Every route a demand can take under `order`, in selection order.
    fn routes_for(&self, order: &[usize], s: VertexId, t: VertexId) -> Vec<Vec<EdgeId>> {
        let graph = self.instance.graph();
        let rho = order.len();
        let k = choices(graph) as usize;
        let mut out = Vec::new();
        let mut code = vec![0usize; rho];
        loop {
            let chosen: Vec<_> = order
                .iter()
                .zip(&code)
                .filter(|(_, &c)| c > 0)
                .map(|(&i, &c)| {
                    let e = self.fes.edges[i];
                    let edge = graph.edge(e);
                    if c == 1 {
                        (e, edge.u, edge.v)
                    } else {
                        (e, edge.v, edge.u)
                    }
                })
                .collect();
            if let Some(r) = self.stitch(s, t, &chosen) {
                out.push(r);
            }
            // Advance the mixed-radix counter, last position fastest.
            let mut i = rho;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                code[i] += 1;
                if code[i] < k {
                    break;
                }
                code[i] = 0;
            }
        }
    }

    /// Explores every branch under the `index`-th ordering, stopping at the
    /// first feasible one.
    pub fn run_ordering(&self, index: u64) -> OrderingOutcome {
        let graph = self.instance.graph();
        let order = nth_permutation(self.fes.rho(), index);
        let demands = self.instance.demands();
        let per_demand: Vec<_> = demands
            .iter()
            .map(|d| self.routes_for(&order, d.source, d.target))
            .collect();
        let mut out = OrderingOutcome {
            labels: None,
            stats: SearchStats::default(),
            failure: None,
        };
        let mut picked: Vec<(&[EdgeId], Time)> = Vec::with_capacity(demands.len());
        self.descend(graph, &per_demand, &mut picked, &mut out);
        if out.labels.is_none() && per_demand.iter().any(|r| r.is_empty()) {
            out.failure.get_or_insert(NoReason::StaticallyUnreachable);
        }
        out
    }

    fn descend<'r>(
        &self,
        graph: &TemporalGraph,
        per_demand: &'r [Vec<Vec<EdgeId>>],
        picked: &mut Vec<(&'r [EdgeId], Time)>,
        out: &mut OrderingOutcome,
    ) -> bool {
        let depth = picked.len();
        if depth == per_demand.len() {
            out.stats.branches += 1;
            return match minimal_labels_capped(graph, picked.iter().copied(), self.instance.delta()) {
                Ok(labels) => {
                    out.labels = Some(labels);
                    true
                }
                Err(r) => {
                    out.failure.get_or_insert(r);
                    false
                }
            };
        }
        out.stats.states += 1;
        let deadline = self.instance.demands()[depth].deadline;
        for route in &per_demand[depth] {
            picked.push((route.as_slice(), deadline));
            // Constraints only accumulate, so an infeasible prefix stays infeasible.
            let partial = if depth + 1 < per_demand.len() {
                minimal_labels_capped(graph, picked.iter().copied(), self.instance.delta()).err()
            } else {
                None
            };
            let found = match partial {
                Some(r) => {
                    out.failure.get_or_insert(r);
                    false
                }
                None => self.descend(graph, per_demand, picked, out),
            };
            picked.pop();
            if found {
                return true;
            }
        }
        false
    }

    /// Combines outcomes of orderings `0..n` (in index order) into the answer.
    /// Only orderings up to the first success are counted.
    pub fn finish<I: IntoIterator<Item = OrderingOutcome>>(&self, outcomes: I) -> Solved {
        let mut stats = SearchStats::default();
        let mut failure = self.blocked;
        for o in outcomes {
            stats.add(o.stats);
            if let Some(labels) = o.labels {
                return Solved {
                    result: SolveResult::certified(self.instance, Delaying::new(labels)),
                    algorithm: Algorithm::Fes,
                    stats,
                };
            }
            if failure.is_none() {
                failure = o.failure;
            }
        }
        Solved {
            result: SolveResult::No(failure.unwrap_or(NoReason::DeadlineUnsatisfiable)),
            algorithm: Algorithm::Fes,
            stats,
        }
    }
}

/// Decides DB or δ-DB by enumerating orderings and selections of `E′`.
pub fn solve_db_fes(instance: &Instance, config: &SolverConfig) -> Result<Solved, SolveError> {
    let search = FesSearch::new(instance, config)?;
    let mut outcomes = Vec::new();
    for i in 0..search.ordering_count() {
        let o = search.run_ordering(i);
        let done = o.labels.is_some();
        outcomes.push(o);
        if done {
            break;
        }
    }
    Ok(search.finish(outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Demand;

    #[test]
    fn fes_sizes() {
        let tree = TemporalGraph::new(false, &["a", "b", "c"], &[("a", "b", 1), ("b", "c", 1)]).unwrap();
        assert_eq!(compute_fes(&tree).rho(), 0);
        let c4 = TemporalGraph::new(
            false,
            &["a", "b", "c", "d"],
            &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)],
        )
        .unwrap();
        assert_eq!(compute_fes(&c4).rho(), 1);
        let two = TemporalGraph::new(
            true,
            &["a", "b", "c", "x", "y", "z"],
            &[("a", "b", 1), ("b", "c", 1), ("c", "a", 1), ("x", "y", 1), ("y", "z", 1), ("z", "x", 1)],
        )
        .unwrap();
        assert_eq!(compute_fes(&two).rho(), 2);
    }

    #[test]
    fn permutations_in_order() {
        let all: Vec<_> = (0..6).map(|i| nth_permutation(3, i)).collect();
        assert_eq!(all[0], [0, 1, 2]);
        assert_eq!(all[1], [0, 2, 1]);
        assert_eq!(all[5], [2, 1, 0]);
    }

    #[test]
    fn undirected_square() {
        let g = TemporalGraph::new(
            false,
            &["a", "b", "c", "d"],
            &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)],
        )
        .unwrap();
        let i = Instance::delay_better(g, vec![Demand::new(0, 2, 2)]).unwrap();
        let s = solve_db_fes(&i, &SolverConfig::default()).unwrap();
        assert!(s.result.is_yes());
    }

    #[test]
    fn directed_triangle() {
        let g = TemporalGraph::new(true, &["u", "v", "w"], &[("u", "v", 1), ("v", "w", 1), ("w", "u", 1)]).unwrap();
        let i = Instance::delay_better(g, vec![Demand::new(2, 1, 3)]).unwrap();
        let s = solve_db_fes(&i, &SolverConfig::default()).unwrap();
        let w = s.result.witness().unwrap();
        assert_eq!(w.get(0), 2);
        assert_eq!(w.get(2), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let g = TemporalGraph::new(
            false,
            &["a", "b", "c", "d"],
            &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)],
        )
        .unwrap();
        let i = Instance::delay_better(g, vec![Demand::new(0, 2, 2)]).unwrap();
        let cfg = SolverConfig {
            branch_budget: 2,
            ..SolverConfig::default()
        };
        assert!(matches!(solve_db_fes(&i, &cfg), Err(SolveError::BudgetExceeded { .. })));
    }
}
