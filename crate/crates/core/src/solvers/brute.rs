//! Exhaustive search over per-edge labels, used as the reference oracle.
//!
//! Edges are assigned closest-to-a-demand-target first (ties by id), each
//! value tried in increasing order. Settling the edges into the targets
//! early lets conflicts between demands surface near the root. A node is
//! pruned when even an optimistic reading of the unassigned edges (usable
//! at any time in their range) misses a deadline. A node whose prefix
//! already works with every remaining edge left at its initial label ends
//! the search, so the answer is the lexicographically first witness in
//! search order; in particular it is Pareto-minimal.

use alloc::collections::{BTreeSet, BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::model::{Delaying, EdgeId, Instance, NoReason, SolveResult, Time, VertexId};
use crate::reach::{statically_reachable, verify};

use super::{Algorithm, SearchStats, SolveError, SolverConfig, Solved};

struct Search<'a> {
    instance: &'a Instance,
    low: Vec<Time>,
    high: Vec<Time>,
    sources: Vec<VertexId>,
    labels: Vec<Time>,
    /// Edges in assignment order, and each edge's position in it.
    order: Vec<EdgeId>,
    pos: Vec<usize>,
    states: u64,
    budget: u64,
}

impl Search<'_> {
    /// Earliest arrivals from `s` when the first `fixed` edges carry their labels
    /// and the others may be taken at any time in `[low, high]`.
    fn optimistic(&self, s: VertexId, fixed: usize) -> Vec<Option<Time>> {
        let graph = self.instance.graph();
        let mut best = vec![None; graph.vertex_count()];
        let mut heap = BinaryHeap::from([Reverse((0, s))]);
        best[s] = Some(0);
        while let Some(Reverse((a, x))) = heap.pop() {
            if best[x] != Some(a) {
                continue;
            }
            for &(e, y) in graph.out_edges(x) {
                let set = self.pos[e] < fixed;
                let t = if set { self.labels[e] } else { self.low[e].max(a + 1) };
                let usable = if set { t > a } else { t <= self.high[e] };
                if usable && best[y].is_none_or(|b| t < b) {
                    best[y] = Some(t);
                    heap.push(Reverse((t, y)));
                }
            }
        }
        best
    }

    fn promising(&self, fixed: usize) -> bool {
        let demands = self.instance.demands();
        if let Some(paths) = self.instance.paths() {
            return paths.iter().zip(demands).all(|(p, d)| {
                let mut a = 0;
                for &e in p.edges() {
                    let t = if self.pos[e] < fixed {
                        self.labels[e]
                    } else {
                        self.low[e].max(a + 1)
                    };
                    if t <= a || t > self.high[e].max(self.low[e]) {
                        return false;
                    }
                    a = t;
                }
                a <= d.deadline
            });
        }
        self.sources.iter().all(|&s| {
            let best = self.optimistic(s, fixed);
            demands
                .iter()
                .filter(|d| d.source == s)
                .all(|d| matches!(best[d.target], Some(a) if a <= d.deadline))
        })
    }

    /// Depth-first over the `k`-th edge in search order; true once
    /// `self.labels` is a witness.
    fn descend(&mut self, k: usize) -> Result<bool, SolveError> {
        self.states += 1;
        if self.states > self.budget {
            return Err(SolveError::BudgetExceeded {
                algorithm: Algorithm::BruteForce,
                what: "states",
                budget: self.budget,
            });
        }
        if !self.promising(k) {
            return Ok(false);
        }
        for &f in &self.order[k..] {
            self.labels[f] = self.low[f];
        }
        if verify(self.instance, &Delaying::new(self.labels.clone())).accepted() {
            return Ok(true);
        }
        if k == self.order.len() {
            return Ok(false);
        }
        let e = self.order[k];
        for t in self.low[e]..=self.high[e] {
            self.labels[e] = t;
            if self.descend(k + 1)? {
                return Ok(true);
            }
        }
        self.labels[e] = self.low[e];
        Ok(false)
    }
}

/// Decides any instance exactly by enumerating labels in
/// `[λ(e), min(cap, λ(e) + δ)]`, where `cap` defaults to `T_max`.
/// Later labels are never needed: they only remove the edge from play.
pub fn solve_brute_force(
    instance: &Instance,
    label_cap: Option<Time>,
    config: &SolverConfig,
) -> Result<Solved, SolveError> {
    let graph = instance.graph();
    let cap = label_cap.unwrap_or_else(|| instance.t_max());
    let low = graph.labels();
    let high: Vec<Time> = low
        .iter()
        .map(|&l| {
            let top = instance.delta().map_or(cap, |d| cap.min(l.saturating_add(d)));
            top.max(l)
        })
        .collect();
    let sources: Vec<VertexId> = instance
        .demands()
        .iter()
        .map(|d| d.source)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let order = search_order(instance);
    let mut pos = vec![0; order.len()];
    for (k, &e) in order.iter().enumerate() {
        pos[e] = k;
    }
    let mut search = Search {
        instance,
        labels: low.clone(),
        order,
        pos,
        low,
        high,
        sources,
        states: 0,
        budget: config.state_budget,
    };
    let found = search.descend(0)?;
    let stats = SearchStats {
        branches: 0,
        states: search.states,
    };
    let result = if found {
        SolveResult::certified(instance, Delaying::new(search.labels))
    } else {
        SolveResult::No(no_reason(instance))
    };
    Ok(Solved {
        result,
        algorithm: Algorithm::BruteForce,
        stats,
    })
}

/// Edges sorted by how many steps separate them from the nearest demand
/// target, travelling in their own orientation; ties keep id order.
fn search_order(instance: &Instance) -> Vec<EdgeId> {
    let graph = instance.graph();
    let mut dist: Vec<Option<usize>> = vec![None; graph.vertex_count()];
    let mut queue = VecDeque::new();
    for d in instance.demands() {
        if dist[d.target].is_none() {
            dist[d.target] = Some(0);
            queue.push_back(d.target);
        }
    }
    // Backwards search: x reaches the target set if some edge x -> y does.
    while let Some(y) = queue.pop_front() {
        let dy = dist[y].unwrap();
        for &(e, x) in graph.incident_edges(y) {
            let edge = graph.edge(e);
            let enters_y = !graph.is_directed() || edge.v == y;
            if enters_y && dist[x].is_none() {
                dist[x] = Some(dy + 1);
                queue.push_back(x);
            }
        }
    }
    let edge_dist = |e: EdgeId| {
        let edge = graph.edge(e);
        let head = dist[edge.v];
        let d = if graph.is_directed() {
            head
        } else {
            match (dist[edge.u], head) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            }
        };
        d.unwrap_or(usize::MAX)
    };
    let mut order: Vec<EdgeId> = (0..graph.edge_count()).collect();
    order.sort_by_key(|&e| (edge_dist(e), e));
    order
}

/// A best-effort explanation for an exhaustive NO.
fn no_reason(instance: &Instance) -> NoReason {
    let graph = instance.graph();
    if instance.paths().is_none() {
        for d in instance.demands() {
            if !statically_reachable(graph, d.source, d.target) {
                return NoReason::StaticallyUnreachable;
            }
        }
    }
    NoReason::DeadlineUnsatisfiable
}
