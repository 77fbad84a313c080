//! Executable forms of the hardness reductions, with brute-force oracles
//! for their source problems.
//!
//! Every generated object carries an [`Origin`]: the gadget that produced it
//! and the source object it stands for. Generated vertex names are
//! namespaced by gadget, so provenance can also be read off the names.

use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{Demand, GraphBuilder, Instance, ModelError, Time, VertexId};

pub mod delta;
pub mod nae;
pub mod planar;

pub use delta::{
    delta_witness_to_db_directed, delta_witness_to_db_undirected, lift_db_witness_directed,
    lift_db_witness_undirected, reduce_db_to_delta, reduce_delta_to_db_directed, reduce_delta_to_db_undirected,
};
pub use nae::{
    nae_directed_labels, nae_undirected_labels, reduce_nae_to_db_directed, reduce_nae_to_db_undirected,
    solve_nae3sat_brute, NaeFormula,
};
pub use planar::{
    cube_graph, planar_forward_solution, reduce_cbpepe_to_delta_db, solve_cbp_epe_brute, Color, PlanarVariant,
    PrecoloredCubicGraph,
};

/// The source object a generated item stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    /// Shared scaffolding not tied to one source object.
    Global,
    Vertex(usize),
    Edge(usize),
    Demand(usize),
    Variable(usize),
    Clause(usize),
}

/// Provenance of one generated vertex, edge or demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Origin {
    /// Gadget role, such as `"hermit"` or `"first-half"`.
    pub role: &'static str,
    pub source: Source,
}

/// A generated instance together with the provenance of its parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub instance: Instance,
    pub vertices: Vec<Origin>,
    pub edges: Vec<Origin>,
    pub demands: Vec<Origin>,
}

impl ReductionOutput {
    /// Wraps an instance whose objects all stand for themselves.
    pub fn identity(instance: Instance) -> Self {
        let g = instance.graph();
        let own = |source| Origin {
            role: "original",
            source,
        };
        Self {
            vertices: (0..g.vertex_count()).map(|v| own(Source::Vertex(v))).collect(),
            edges: (0..g.edge_count()).map(|e| own(Source::Edge(e))).collect(),
            demands: (0..instance.demands().len()).map(|d| own(Source::Demand(d))).collect(),
            instance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("DIRECTED_INPUT: this reduction takes undirected instances")]
    DirectedInput,
    #[error("UNDIRECTED_INPUT: this reduction takes directed instances")]
    UndirectedInput,
    #[error("WRONG_KIND: expected a {expected} instance")]
    WrongKind { expected: &'static str },
    #[error("TOO_LARGE: {what} is {size}, at most {limit} supported")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("INVALID_INPUT: {0}")]
    InvalidInput(String),
    #[error("IMPROPER_COLORING: {0}")]
    ImproperColoring(String),
    #[error("NAME_COLLISION: {0}")]
    NameCollision(ModelError),
}

impl ReductionError {
    pub fn code(&self) -> &'static str {
        match self {
            ReductionError::DirectedInput => "DIRECTED_INPUT",
            ReductionError::UndirectedInput => "UNDIRECTED_INPUT",
            ReductionError::WrongKind { .. } => "WRONG_KIND",
            ReductionError::TooLarge { .. } => "TOO_LARGE",
            ReductionError::InvalidInput(_) => "INVALID_INPUT",
            ReductionError::ImproperColoring(_) => "IMPROPER_COLORING",
            ReductionError::NameCollision(_) => "NAME_COLLISION",
        }
    }
}

/// Collects vertices, edges and demands with their origins.
pub(crate) struct Emitter {
    builder: GraphBuilder,
    vertices: Vec<Origin>,
    edges: Vec<Origin>,
    demands: Vec<Demand>,
    demand_origins: Vec<Origin>,
}

impl Emitter {
    pub(crate) fn new(directed: bool) -> Self {
        Self {
            builder: GraphBuilder::new(directed),
            vertices: Vec::new(),
            edges: Vec::new(),
            demands: Vec::new(),
            demand_origins: Vec::new(),
        }
    }

    /// Adds a fresh vertex; a name clash surfaces in [`Emitter::finish`].
    pub(crate) fn vertex(&mut self, name: impl Into<String>, role: &'static str, source: Source) -> VertexId {
        self.vertices.push(Origin { role, source });
        self.builder.add_vertex(name)
    }

    pub(crate) fn edge(&mut self, u: VertexId, v: VertexId, time: Time, role: &'static str, source: Source) {
        self.edges.push(Origin { role, source });
        self.builder.add_edge(u, v, time);
    }

    pub(crate) fn demand(&mut self, s: VertexId, t: VertexId, deadline: Time, role: &'static str, source: Source) {
        self.demands.push(Demand::new(s, t, deadline));
        self.demand_origins.push(Origin { role, source });
    }

    pub(crate) fn finish(self, delta: Option<Time>) -> Result<ReductionOutput, ReductionError> {
        let graph = self.builder.build().map_err(ReductionError::NameCollision)?;
        let instance = match delta {
            Some(d) => Instance::delta_delay_better(graph, self.demands, d),
            None => Instance::delay_better(graph, self.demands),
        }
        .map_err(ReductionError::NameCollision)?;
        Ok(ReductionOutput {
            instance,
            vertices: self.vertices,
            edges: self.edges,
            demands: self.demand_origins,
        })
    }
}
