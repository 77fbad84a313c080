//! Temporal graphs, demands, delayings and solver results.
//!
//! Vertices are opaque string names mapped to dense indices in insertion
//! order. Undirected edges are stored with their endpoints in lexicographic
//! name order, so every footprint edge has exactly one [`EdgeId`] and one
//! label.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A time step. Edge labels are always at least 1; arrival at a source is 0.
pub type Time = u64;
/// Dense vertex index into [`TemporalGraph::vertex_names`].
pub type VertexId = usize;
/// Dense edge index into [`TemporalGraph::edges`].
pub type EdgeId = usize;

/// Validation failures, each carrying the location of the offending field.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("{at}: duplicate vertex '{name}'")]
    DuplicateVertex { at: String, name: String },
    #[error("{at}: unknown vertex '{name}'")]
    UnknownVertex { at: String, name: String },
    #[error("{at}: self-loop on '{name}'")]
    SelfLoop { at: String, name: String },
    #[error("{at}: repeated edge ('{u}', '{v}')")]
    RepeatedEdge { at: String, u: String, v: String },
    #[error("{at}: edge times must be at least 1")]
    ZeroTime { at: String },
    #[error("{at}: no edge ('{u}', '{v}') in the graph")]
    MissingEdge { at: String, u: String, v: String },
    #[error("{at}: consecutive path steps do not connect")]
    Discontiguous { at: String },
    #[error("{at}: path does not run from the demand source to its target")]
    PathEndpoints { at: String },
    #[error("{at}: path visits '{name}' twice")]
    PathRepeatsVertex { at: String, name: String },
    #[error("{at}: either every demand carries a path or none does")]
    MixedDemandKinds { at: String },
    #[error("delta cannot be combined with path demands")]
    DeltaWithPaths,
}

/// One footprint edge with its initial label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub time: Time,
}

impl Edge {
    /// The other endpoint, if `x` is an endpoint.
    pub fn other(&self, x: VertexId) -> Option<VertexId> {
        if x == self.u {
            Some(self.v)
        } else if x == self.v {
            Some(self.u)
        } else {
            None
        }
    }
}

/// A simple temporal graph: a directed or undirected footprint plus one
/// label per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    directed: bool,
    names: Vec<String>,
    index: BTreeMap<String, VertexId>,
    edges: Vec<Edge>,
    lookup: BTreeMap<(VertexId, VertexId), EdgeId>,
    // Traversable (edge, neighbour) pairs leaving each vertex.
    out: Vec<Vec<(EdgeId, VertexId)>>,
    // Incident (edge, neighbour) pairs, orientation ignored.
    incident: Vec<Vec<(EdgeId, VertexId)>>,
}

/// Incremental construction of a [`TemporalGraph`]; validation happens in
/// [`GraphBuilder::build`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    directed: bool,
    names: Vec<String>,
    index: BTreeMap<String, VertexId>,
    duplicate: Option<ModelError>,
    edges: Vec<(VertexId, VertexId, Time)>,
}

impl GraphBuilder {
    pub fn new(directed: bool) -> Self {
        Self {
            directed,
            names: Vec::new(),
            index: BTreeMap::new(),
            duplicate: None,
            edges: Vec::new(),
        }
    }

    /// Adds a fresh vertex. A repeated name is reported by `build`.
    pub fn add_vertex(&mut self, name: impl Into<String>) -> VertexId {
        let name = name.into();
        let id = self.names.len();
        if self.index.contains_key(&name) {
            if self.duplicate.is_none() {
                self.duplicate = Some(ModelError::DuplicateVertex {
                    at: format!("vertices[{id}]"),
                    name: name.clone(),
                });
            }
        } else {
            self.index.insert(name.clone(), id);
        }
        self.names.push(name);
        id
    }

    /// Returns the vertex with this name, adding it if needed.
    pub fn vertex(&mut self, name: &str) -> VertexId {
        match self.index.get(name) {
            Some(&id) => id,
            None => self.add_vertex(name),
        }
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, time: Time) -> EdgeId {
        self.edges.push((u, v, time));
        self.edges.len() - 1
    }

    /// Adds an edge between named vertices, creating them on first use.
    pub fn edge(&mut self, u: &str, v: &str, time: Time) -> EdgeId {
        let (u, v) = (self.vertex(u), self.vertex(v));
        self.add_edge(u, v, time)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn build(self) -> Result<TemporalGraph, ModelError> {
        if let Some(err) = self.duplicate {
            return Err(err);
        }
        let n = self.names.len();
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut lookup = BTreeMap::new();
        let mut out = alloc::vec![Vec::new(); n];
        let mut incident = alloc::vec![Vec::new(); n];
        for (i, &(mut u, mut v, time)) in self.edges.iter().enumerate() {
            let at = format!("edges[{i}]");
            for x in [u, v] {
                if x >= n {
                    return Err(ModelError::UnknownVertex {
                        at,
                        name: format!("#{x}"),
                    });
                }
            }
            if u == v {
                return Err(ModelError::SelfLoop {
                    at,
                    name: self.names[u].clone(),
                });
            }
            if time == 0 {
                return Err(ModelError::ZeroTime { at });
            }
            if !self.directed && self.names[u] > self.names[v] {
                core::mem::swap(&mut u, &mut v);
            }
            if lookup.insert((u, v), i).is_some() {
                return Err(ModelError::RepeatedEdge {
                    at,
                    u: self.names[u].clone(),
                    v: self.names[v].clone(),
                });
            }
            edges.push(Edge { u, v, time });
            out[u].push((i, v));
            if !self.directed {
                out[v].push((i, u));
            }
            incident[u].push((i, v));
            incident[v].push((i, u));
        }
        Ok(TemporalGraph {
            directed: self.directed,
            names: self.names,
            index: self.index,
            edges,
            lookup,
            out,
            incident,
        })
    }
}

impl TemporalGraph {
    /// Builds a graph from named vertices and named edges.
    pub fn new<S: AsRef<str>>(
        directed: bool,
        vertices: &[S],
        edges: &[(S, S, Time)],
    ) -> Result<Self, ModelError> {
        let mut b = GraphBuilder::new(directed);
        for v in vertices {
            b.add_vertex(v.as_ref());
        }
        for (i, (u, v, t)) in edges.iter().enumerate() {
            let id = |name: &str, end: &str| {
                b.vertex_id(name).ok_or_else(|| ModelError::UnknownVertex {
                    at: format!("edges[{i}].{end}"),
                    name: name.into(),
                })
            };
            let (u, v) = (id(u.as_ref(), "u")?, id(v.as_ref(), "v")?);
            b.add_edge(u, v, *t);
        }
        b.build()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    /// Initial labels indexed by edge.
    pub fn labels(&self) -> Vec<Time> {
        self.edges.iter().map(|e| e.time).collect()
    }

    /// The edge that can be traversed from `u` to `v`, respecting orientation.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if self.directed {
            self.lookup.get(&(u, v)).copied()
        } else {
            self.lookup
                .get(&(u, v))
                .or_else(|| self.lookup.get(&(v, u)))
                .copied()
        }
    }

    pub fn find_edge_by_name(&self, u: &str, v: &str) -> Option<EdgeId> {
        self.find_edge(self.vertex_id(u)?, self.vertex_id(v)?)
    }

    /// Edges traversable out of `v`, with the neighbour they lead to.
    pub fn out_edges(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.out[v]
    }

    /// Edges incident to `v` regardless of orientation.
    pub fn incident_edges(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.incident[v]
    }

    /// Footprint degree of `v`, orientation ignored.
    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v].len()
    }

    /// Lifetime: the largest initial label (0 without edges).
    pub fn lifetime(&self) -> Time {
        self.edges.iter().map(|e| e.time).max().unwrap_or(0)
    }

    /// Same footprint, new initial labels.
    pub fn relabeled(&self, labels: &[Time]) -> Self {
        assert_eq!(labels.len(), self.edges.len());
        let mut g = self.clone();
        for (e, &t) in g.edges.iter_mut().zip(labels) {
            e.time = t;
        }
        g
    }

    /// A builder seeded with this graph's vertices (but no edges).
    pub fn vertex_builder(&self) -> GraphBuilder {
        let mut b = GraphBuilder::new(self.directed);
        for n in &self.names {
            b.add_vertex(n.as_str());
        }
        b
    }
}

/// A request to travel from `source` to `target`, arriving no later than
/// `deadline`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Demand {
    pub source: VertexId,
    pub target: VertexId,
    pub deadline: Time,
}

impl Demand {
    pub fn new(source: VertexId, target: VertexId, deadline: Time) -> Self {
        Self {
            source,
            target,
            deadline,
        }
    }
}

/// A simple footprint path, stored both as its vertex sequence and the
/// edges between consecutive vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticPath {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl StaticPath {
    /// Validates `vertices` as a simple path in `graph` (edges traversed in
    /// their orientation when directed).
    pub fn new(graph: &TemporalGraph, vertices: Vec<VertexId>, at: &str) -> Result<Self, ModelError> {
        let n = graph.vertex_count();
        let mut seen = alloc::vec![false; n];
        for (k, &v) in vertices.iter().enumerate() {
            if v >= n {
                return Err(ModelError::UnknownVertex {
                    at: format!("{at}[{k}]"),
                    name: format!("#{v}"),
                });
            }
            if core::mem::replace(&mut seen[v], true) {
                return Err(ModelError::PathRepeatsVertex {
                    at: at.into(),
                    name: graph.name(v).into(),
                });
            }
        }
        let mut edges = Vec::with_capacity(vertices.len().saturating_sub(1));
        for (k, w) in vertices.windows(2).enumerate() {
            let e = graph
                .find_edge(w[0], w[1])
                .ok_or_else(|| ModelError::MissingEdge {
                    at: format!("{at}[{k}]"),
                    u: graph.name(w[0]).into(),
                    v: graph.name(w[1]).into(),
                })?;
            edges.push(e);
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// The last edge of the path, if any.
    pub fn final_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    /// `(from, to, edge)` for each step.
    pub fn steps(&self) -> impl Iterator<Item = (VertexId, VertexId, EdgeId)> + '_ {
        self.vertices
            .windows(2)
            .zip(&self.edges)
            .map(|(w, &e)| (w[0], w[1], e))
    }
}

/// Which decision problem an [`Instance`] poses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    DelayBetter,
    DeltaDelayBetter,
    PathDelayBetter,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::DelayBetter => "DB",
            ProblemKind::DeltaDelayBetter => "DELTA_DB",
            ProblemKind::PathDelayBetter => "PATH_DB",
        })
    }
}

/// A validated problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: TemporalGraph,
    demands: Vec<Demand>,
    paths: Option<Vec<StaticPath>>,
    delta: Option<Time>,
}

fn check_demands(graph: &TemporalGraph, demands: &[Demand]) -> Result<(), ModelError> {
    let n = graph.vertex_count();
    for (i, d) in demands.iter().enumerate() {
        for (x, end) in [(d.source, "from"), (d.target, "to")] {
            if x >= n {
                return Err(ModelError::UnknownVertex {
                    at: format!("demands[{i}].{end}"),
                    name: format!("#{x}"),
                });
            }
        }
    }
    Ok(())
}

impl Instance {
    pub fn delay_better(graph: TemporalGraph, demands: Vec<Demand>) -> Result<Self, ModelError> {
        check_demands(&graph, &demands)?;
        Ok(Self {
            graph,
            demands,
            paths: None,
            delta: None,
        })
    }

    pub fn delta_delay_better(
        graph: TemporalGraph,
        demands: Vec<Demand>,
        delta: Time,
    ) -> Result<Self, ModelError> {
        check_demands(&graph, &demands)?;
        Ok(Self {
            graph,
            demands,
            paths: None,
            delta: Some(delta),
        })
    }

    /// Path demands given as vertex sequences, one per demand.
    pub fn path_delay_better(
        graph: TemporalGraph,
        demands: Vec<Demand>,
        paths: Vec<Vec<VertexId>>,
    ) -> Result<Self, ModelError> {
        check_demands(&graph, &demands)?;
        if paths.len() != demands.len() {
            return Err(ModelError::MixedDemandKinds {
                at: format!("demands[{}]", paths.len().min(demands.len())),
            });
        }
        let mut checked = Vec::with_capacity(paths.len());
        for (i, (d, p)) in demands.iter().zip(paths).enumerate() {
            let at = format!("demands[{i}].path");
            if p.first() != Some(&d.source) || p.last() != Some(&d.target) {
                return Err(ModelError::PathEndpoints { at });
            }
            checked.push(StaticPath::new(&graph, p, &at)?);
        }
        Ok(Self {
            graph,
            demands,
            paths: Some(checked),
            delta: None,
        })
    }

    pub fn kind(&self) -> ProblemKind {
        if self.paths.is_some() {
            ProblemKind::PathDelayBetter
        } else if self.delta.is_some() {
            ProblemKind::DeltaDelayBetter
        } else {
            ProblemKind::DelayBetter
        }
    }

    pub fn graph(&self) -> &TemporalGraph {
        &self.graph
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    /// Prescribed paths, present exactly for Path-DelayBetter.
    pub fn paths(&self) -> Option<&[StaticPath]> {
        self.paths.as_deref()
    }

    pub fn delta(&self) -> Option<Time> {
        self.delta
    }

    /// Lifetime of the initial assignment.
    pub fn t_init(&self) -> Time {
        self.graph.lifetime()
    }

    /// Latest deadline of any demand (0 without demands).
    pub fn t_max(&self) -> Time {
        self.demands.iter().map(|d| d.deadline).max().unwrap_or(0)
    }

    /// The same problem over a different graph with the same vertex set.
    /// Path demands are re-resolved against the new edge ids.
    pub fn with_graph(&self, graph: TemporalGraph, demands: Vec<Demand>) -> Result<Self, ModelError> {
        match (&self.paths, self.delta) {
            (Some(paths), _) => {
                let seqs = paths.iter().map(|p| p.vertices().to_vec()).collect();
                Self::path_delay_better(graph, demands, seqs)
            }
            (None, Some(delta)) => Self::delta_delay_better(graph, demands, delta),
            (None, None) => Self::delay_better(graph, demands),
        }
    }

    /// Replaces δ; `None` turns a δ-instance into a plain one.
    pub fn with_delta(&self, delta: Option<Time>) -> Result<Self, ModelError> {
        if self.paths.is_some() && delta.is_some() {
            return Err(ModelError::DeltaWithPaths);
        }
        let mut i = self.clone();
        i.delta = delta;
        Ok(i)
    }
}

/// A full reassignment of edge labels, indexed by [`EdgeId`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Delaying(Vec<Time>);

impl Delaying {
    pub fn new(labels: Vec<Time>) -> Self {
        Self(labels)
    }

    /// The delaying that changes nothing.
    pub fn identity(graph: &TemporalGraph) -> Self {
        Self(graph.labels())
    }

    pub fn labels(&self) -> &[Time] {
        &self.0
    }

    pub fn get(&self, e: EdgeId) -> Time {
        self.0[e]
    }

    pub fn set(&mut self, e: EdgeId, t: Time) {
        self.0[e] = t;
    }

    pub fn into_labels(self) -> Vec<Time> {
        self.0
    }

    /// Largest per-edge delay relative to `graph`'s initial labels.
    pub fn max_delay(&self, graph: &TemporalGraph) -> Time {
        graph
            .edges()
            .iter()
            .zip(&self.0)
            .map(|(e, &t)| t.saturating_sub(e.time))
            .max()
            .unwrap_or(0)
    }
}

/// One traversal of an edge inside a temporal path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimedStep {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    pub time: Time,
}

/// Consecutive steps with strictly increasing times.
pub type TemporalPath = Vec<TimedStep>;

/// Why an instance has no solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoReason {
    DeadlineUnsatisfiable,
    PrecedenceCycle,
    StaticallyUnreachable,
    OrientationBlocked,
    /// The least labels that meet every ordering constraint exceed δ somewhere.
    DelayBoundExceeded,
}

impl NoReason {
    pub const ALL: [NoReason; 5] = [
        NoReason::DeadlineUnsatisfiable,
        NoReason::PrecedenceCycle,
        NoReason::StaticallyUnreachable,
        NoReason::OrientationBlocked,
        NoReason::DelayBoundExceeded,
    ];

    pub fn code(self) -> &'static str {
        match self {
            NoReason::DeadlineUnsatisfiable => "DEADLINE_UNSATISFIABLE",
            NoReason::PrecedenceCycle => "PRECEDENCE_CYCLE",
            NoReason::StaticallyUnreachable => "STATICALLY_UNREACHABLE",
            NoReason::OrientationBlocked => "ORIENTATION_BLOCKED",
            NoReason::DelayBoundExceeded => "DELAY_BOUND_EXCEEDED",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.code() == code)
    }
}

impl fmt::Display for NoReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// The answer to an instance. A `Yes` always carries a witness the verifier
/// accepts, plus one temporal path per demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Yes {
        witness: Delaying,
        routes: Vec<TemporalPath>,
    },
    No(NoReason),
}

impl SolveResult {
    pub fn is_yes(&self) -> bool {
        matches!(self, SolveResult::Yes { .. })
    }

    pub fn witness(&self) -> Option<&Delaying> {
        match self {
            SolveResult::Yes { witness, .. } => Some(witness),
            SolveResult::No(_) => None,
        }
    }

    pub fn reason(&self) -> Option<NoReason> {
        match self {
            SolveResult::Yes { .. } => None,
            SolveResult::No(r) => Some(*r),
        }
    }

    /// Certifies `witness` against `instance` and attaches per-demand routes.
    ///
    /// Panics if the verifier rejects the witness: every engine must only
    /// hand over witnesses it has proven feasible.
    pub fn certified(instance: &Instance, witness: Delaying) -> Self {
        let verdict = crate::reach::verify(instance, &witness);
        if let Some(v) = verdict.violation {
            panic!("engine produced a rejected witness: {v}");
        }
        let routes = verdict
            .demands
            .into_iter()
            .map(|d| d.route.unwrap_or_default())
            .collect();
        SolveResult::Yes { witness, routes }
    }
}
