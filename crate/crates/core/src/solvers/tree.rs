use alloc::vec::Vec;

use crate::model::{Delaying, EdgeId, Instance, NoReason, ProblemKind, SolveResult, Time};
use crate::pathdb::minimal_labels_capped;

use super::forest::{split_forest, SpanningForest};
use super::{Algorithm, SearchStats, SolveError, Solved};

/// DelayBetter on forest footprints: every demand has at most one static
/// route, so the instance is a Path-DB instance in disguise.
pub fn solve_db_tree(instance: &Instance) -> Result<Solved, SolveError> {
    if instance.kind() == ProblemKind::PathDelayBetter {
        return Err(SolveError::Unsupported {
            algorithm: Algorithm::Tree,
            kind: instance.kind(),
        });
    }
    let graph = instance.graph();
    let (forest_edges, feedback) = split_forest(graph);
    if !feedback.is_empty() {
        return Err(SolveError::NotATree);
    }
    let forest = SpanningForest::new(graph, &forest_edges);
    let done = |result| {
        Ok(Solved {
            result,
            algorithm: Algorithm::Tree,
            stats: SearchStats {
                branches: 1,
                states: instance.demands().len() as u64,
            },
        })
    };

    let mut routes: Vec<(Vec<EdgeId>, Time)> = Vec::with_capacity(instance.demands().len());
    for d in instance.demands() {
        let Some((vertices, edges)) = forest.path(d.source, d.target) else {
            return done(SolveResult::No(NoReason::StaticallyUnreachable));
        };
        if graph.is_directed() {
            let blocked = vertices
                .windows(2)
                .zip(&edges)
                .any(|(w, &e)| graph.edge(e).u != w[0]);
            if blocked {
                return done(SolveResult::No(NoReason::OrientationBlocked));
            }
        }
        routes.push((edges, d.deadline));
    }
    let result = match minimal_labels_capped(
        graph,
        routes.iter().map(|(r, t)| (r.as_slice(), *t)),
        instance.delta(),
    ) {
        Ok(labels) => SolveResult::certified(instance, Delaying::new(labels)),
        Err(reason) => SolveResult::No(reason),
    };
    done(result)
}
