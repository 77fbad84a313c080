//! Strict temporal reachability under a fixed assignment, the solution
//! verifier, and lifetime compression.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{
    Delaying, Demand, EdgeId, Instance, ModelError, TemporalGraph, TemporalPath,
    Time, TimedStep, VertexId,
};

/// Earliest arrival times from one source. `None` means unreachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalTable {
    source: VertexId,
    arrival: Vec<Option<Time>>,
    via: Vec<Option<(EdgeId, VertexId)>>,
}

impl ArrivalTable {
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn arrival(&self, v: VertexId) -> Option<Time> {
        self.arrival[v]
    }

    pub fn arrivals(&self) -> &[Option<Time>] {
        &self.arrival
    }

    /// Vertices reachable by time `t`.
    pub fn reachable_by(&self, t: Time) -> impl Iterator<Item = VertexId> + '_ {
        self.arrival
            .iter()
            .enumerate()
            .filter(move |(_, a)| matches!(a, Some(x) if *x <= t))
            .map(|(v, _)| v)
    }

    /// A foremost temporal path to `v`, following the recorded predecessors.
    pub fn path_to(&self, v: VertexId, labels: &[Time]) -> Option<TemporalPath> {
        self.arrival[v]?;
        let mut steps = Vec::new();
        let mut cur = v;
        while let Some((e, prev)) = self.via[cur] {
            steps.push(TimedStep {
                edge: e,
                from: prev,
                to: cur,
                time: labels[e],
            });
            cur = prev;
        }
        steps.reverse();
        Some(steps)
    }
}

/// Earliest arrival by strict temporal paths from `source` under `labels`.
///
/// Time-edges are scanned in nondecreasing label order; an edge at time `t`
/// extends a vertex reached strictly before `t`. Equal-time edges never
/// chain because a vertex first reached at `t` fails the `< t` test.
pub fn earliest_arrivals(graph: &TemporalGraph, labels: &[Time], source: VertexId) -> ArrivalTable {
    assert_eq!(labels.len(), graph.edge_count(), "labels must cover every edge");
    let n = graph.vertex_count();
    let mut arrival = vec![None; n];
    let mut via = vec![None; n];
    arrival[source] = Some(0);
    let mut order: Vec<EdgeId> = (0..graph.edge_count()).collect();
    order.sort_by_key(|&e| (labels[e], e));
    for e in order {
        let t = labels[e];
        let edge = graph.edge(e);
        let mut relax = |from: VertexId, to: VertexId| {
            if matches!(arrival[from], Some(a) if a < t) && arrival[to].is_none() {
                arrival[to] = Some(t);
                via[to] = Some((e, from));
            }
        };
        relax(edge.u, edge.v);
        if !graph.is_directed() {
            relax(edge.v, edge.u);
        }
    }
    ArrivalTable {
        source,
        arrival,
        via,
    }
}

/// [`earliest_arrivals`] addressed by vertex name.
pub fn earliest_arrivals_from(
    graph: &TemporalGraph,
    labels: &[Time],
    source: &str,
) -> Result<ArrivalTable, ModelError> {
    let s = graph
        .vertex_id(source)
        .ok_or_else(|| ModelError::UnknownVertex {
            at: "source".into(),
            name: source.into(),
        })?;
    Ok(earliest_arrivals(graph, labels, s))
}

/// The first condition a candidate delaying violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    LabelCount { expected: usize, found: usize },
    /// λ′(e) < λ(e).
    Advanced { edge: EdgeId },
    /// λ′(e) > λ(e) + δ.
    DelayTooLarge { edge: EdgeId, delta: Time },
    /// No temporal path reaches the target by the deadline.
    DemandUnmet { demand: usize },
    /// The prescribed path's labels are not strictly increasing.
    PathNotIncreasing { demand: usize, step: usize },
    /// The prescribed path arrives after the deadline.
    PathLate { demand: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LabelCount { expected, found } => {
                write!(f, "expected {expected} labels, found {found}")
            }
            Violation::Advanced { edge } => write!(f, "edge {edge} moved earlier"),
            Violation::DelayTooLarge { edge, delta } => {
                write!(f, "edge {edge} delayed by more than {delta}")
            }
            Violation::DemandUnmet { demand } => write!(f, "demand {demand} unmet"),
            Violation::PathNotIncreasing { demand, step } => {
                write!(f, "demand {demand}: labels not increasing at step {step}")
            }
            Violation::PathLate { demand } => write!(f, "demand {demand}: path arrives late"),
        }
    }
}

/// Per-demand outcome of a verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandReport {
    pub arrival: Option<Time>,
    pub satisfied: bool,
    pub route: Option<TemporalPath>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub violation: Option<Violation>,
    pub demands: Vec<DemandReport>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks a candidate delaying against every condition of the instance.
pub fn verify(instance: &Instance, cand: &Delaying) -> Verdict {
    let graph = instance.graph();
    let labels = cand.labels();
    if labels.len() != graph.edge_count() {
        return Verdict {
            violation: Some(Violation::LabelCount {
                expected: graph.edge_count(),
                found: labels.len(),
            }),
            demands: Vec::new(),
        };
    }
    let mut violation = None;
    for (e, (edge, &t)) in graph.edges().iter().zip(labels).enumerate() {
        if t < edge.time {
            violation = Some(Violation::Advanced { edge: e });
            break;
        }
        if let Some(delta) = instance.delta() {
            if t > edge.time.saturating_add(delta) {
                violation = Some(Violation::DelayTooLarge { edge: e, delta });
                break;
            }
        }
    }
    let demands = match instance.paths() {
        Some(paths) => paths
            .iter()
            .zip(instance.demands())
            .enumerate()
            .map(|(i, (path, d))| {
                let mut prev = 0;
                let mut route = Vec::new();
                let mut bad = None;
                for (k, (from, to, e)) in path.steps().enumerate() {
                    let t = labels[e];
                    if t <= prev && bad.is_none() {
                        bad = Some(Violation::PathNotIncreasing { demand: i, step: k });
                    }
                    prev = t;
                    route.push(TimedStep {
                        edge: e,
                        from,
                        to,
                        time: t,
                    });
                }
                if bad.is_none() && prev > d.deadline {
                    bad = Some(Violation::PathLate { demand: i });
                }
                if violation.is_none() {
                    violation = bad;
                }
                DemandReport {
                    arrival: bad.is_none().then_some(prev),
                    satisfied: bad.is_none(),
                    route: bad.is_none().then_some(route),
                }
            })
            .collect(),
        None => {
            let mut tables: BTreeMap<VertexId, ArrivalTable> = BTreeMap::new();
            instance
                .demands()
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    let table = tables
                        .entry(d.source)
                        .or_insert_with(|| earliest_arrivals(graph, labels, d.source));
                    let arrival = table.arrival(d.target);
                    let satisfied = matches!(arrival, Some(a) if a <= d.deadline);
                    if !satisfied && violation.is_none() {
                        violation = Some(Violation::DemandUnmet { demand: i });
                    }
                    DemandReport {
                        arrival,
                        satisfied,
                        route: table.path_to(d.target, labels),
                    }
                })
                .collect()
        }
    };
    Verdict { violation, demands }
}

/// A monotone map between original and compressed times.
///
/// Each anchor pairs an original time with its compressed position; times
/// between anchors keep their offset from the anchor below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeMap {
    anchors: Vec<(Time, Time)>,
}

impl TimeMap {
    pub fn anchors(&self) -> &[(Time, Time)] {
        &self.anchors
    }

    fn anchor_below_new(&self, c: Time) -> (Time, Time) {
        let k = self.anchors.partition_point(|&(_, n)| n <= c);
        self.anchors[k.saturating_sub(1)]
    }

    fn anchor_below_old(&self, t: Time) -> (Time, Time) {
        let k = self.anchors.partition_point(|&(o, _)| o <= t);
        self.anchors[k.saturating_sub(1)]
    }

    /// Compressed position of an original time. Exact on anchors.
    pub fn compress(&self, t: Time) -> Time {
        let (o, n) = self.anchor_below_old(t);
        let next = self
            .anchors
            .iter()
            .find(|&&(_, nn)| nn > n)
            .map(|&(_, nn)| nn - 1)
            .unwrap_or(Time::MAX);
        (n + (t - o)).min(next)
    }

    /// Original time of a compressed position.
    pub fn lift(&self, c: Time) -> Time {
        let (o, n) = self.anchor_below_new(c);
        o + (c - n)
    }
}

/// An equisatisfiable copy of an instance with polynomially bounded times,
/// plus what is needed to lift its witnesses back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compression {
    pub instance: Instance,
    /// Original id of each kept edge, indexed by compressed edge id.
    pub kept: Vec<EdgeId>,
    pub times: TimeMap,
}

impl Compression {
    /// Turns a witness of the compressed instance into one of `original`.
    /// Dropped edges keep their initial label.
    pub fn lift(&self, original: &Instance, witness: &Delaying) -> Delaying {
        let mut labels = original.graph().labels();
        for (c, &e) in self.kept.iter().enumerate() {
            labels[e] = self.times.lift(witness.get(c));
        }
        Delaying::new(labels)
    }
}

/// Shrinks the time axis so that `T_max` is polynomial in the instance size.
///
/// Edges whose initial label exceeds every deadline can never lie on a
/// satisfying path and are dropped (unless a prescribed path names them).
/// Explicit times are the deadlines, the remaining labels and time 0.
/// DelayBetter and Path-DB shrink every gap between consecutive explicit
/// times to at most `max(|E|, 1)`. δ-DelayBetter keeps only the relevant
/// times `[t, t + δ]` for explicit `t` and deletes the rest.
pub fn compress_lifetime(instance: &Instance) -> Compression {
    let graph = instance.graph();
    let t_max = instance.t_max();
    let pinned: BTreeSet<EdgeId> = instance
        .paths()
        .map(|ps| ps.iter().flat_map(|p| p.edges().iter().copied()).collect())
        .unwrap_or_default();
    let kept: Vec<EdgeId> = (0..graph.edge_count())
        .filter(|e| graph.edge(*e).time <= t_max || pinned.contains(e))
        .collect();

    let mut explicit: BTreeSet<Time> = instance.demands().iter().map(|d| d.deadline).collect();
    explicit.extend(kept.iter().map(|&e| graph.edge(e).time));

    let anchors = match instance.delta() {
        None => {
            let gap = kept.len().max(1) as Time;
            let mut anchors = vec![(0, 0)];
            for &t in explicit.iter().filter(|&&t| t > 0) {
                let &(po, pn) = anchors.last().unwrap();
                anchors.push((t, pn + (t - po).min(gap)));
            }
            anchors
        }
        Some(delta) => {
            // Maximal runs of relevant times, each mapped onto consecutive positions.
            let mut runs: Vec<(Time, Time)> = Vec::new();
            for &t in &explicit {
                let end = t.saturating_add(delta);
                match runs.last_mut() {
                    Some((_, e)) if t <= e.saturating_add(1) => *e = (*e).max(end),
                    _ => runs.push((t, end)),
                }
            }
            let mut anchors = vec![(0, 0)];
            let mut next = 1;
            for (s, e) in runs {
                if s == 0 {
                    next = e + 1;
                    continue;
                }
                anchors.push((s, next));
                next += e - s + 1;
            }
            anchors
        }
    };
    let times = TimeMap { anchors };

    let mut b = graph.vertex_builder();
    for &e in &kept {
        let edge = graph.edge(e);
        b.add_edge(edge.u, edge.v, times.compress(edge.time));
    }
    let compressed = b.build().expect("compression preserves graph validity");
    let demands = instance
        .demands()
        .iter()
        .map(|d| Demand {
            deadline: times.compress(d.deadline),
            ..*d
        })
        .collect();
    let instance = instance
        .with_graph(compressed, demands)
        .expect("compression preserves instance validity");
    Compression {
        instance,
        kept,
        times,
    }
}

/// Reachability ignoring time: can `source` reach `target` in the footprint?
pub fn statically_reachable(graph: &TemporalGraph, source: VertexId, target: VertexId) -> bool {
    let mut seen = vec![false; graph.vertex_count()];
    let mut stack = vec![source];
    seen[source] = true;
    while let Some(x) = stack.pop() {
        if x == target {
            return true;
        }
        for &(_, y) in graph.out_edges(x) {
            if !core::mem::replace(&mut seen[y], true) {
                stack.push(y);
            }
        }
    }
    false
}
