use alloc::collections::BinaryHeap;
use alloc::vec;
use core::cmp::Reverse;

use crate::model::{Delaying, Instance, NoReason, ProblemKind, SolveResult, Time};

use super::{Algorithm, SearchStats, SolveError, Solved};

/// DelayBetter when every demand leaves the same vertex.
///
/// `opt(u)` is the earliest time any delaying lets the source reach `u`:
/// `opt(u) = min over edges (w,u) of max(λ(w,u), opt(w) + 1)`, computed
/// label-setting style. Relabelling the edges of the resulting foremost tree
/// to their `opt` values realizes every `opt` simultaneously.
pub fn solve_db_single_source(instance: &Instance) -> Result<Solved, SolveError> {
    if instance.kind() != ProblemKind::DelayBetter {
        return Err(SolveError::Unsupported {
            algorithm: Algorithm::SingleSource,
            kind: instance.kind(),
        });
    }
    let graph = instance.graph();
    let demands = instance.demands();
    let Some(source) = demands.first().map(|d| d.source) else {
        return Ok(Solved {
            result: SolveResult::certified(instance, Delaying::identity(graph)),
            algorithm: Algorithm::SingleSource,
            stats: SearchStats::default(),
        });
    };
    if demands.iter().any(|d| d.source != source) {
        return Err(SolveError::MixedSources);
    }

    let n = graph.vertex_count();
    let mut opt: alloc::vec::Vec<Option<Time>> = vec![None; n];
    let mut tree_edge = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::from([Reverse((0, source))]);
    opt[source] = Some(0);
    let mut states = 0u64;
    while let Some(Reverse((t, w))) = heap.pop() {
        if core::mem::replace(&mut settled[w], true) {
            continue;
        }
        states += 1;
        for &(e, u) in graph.out_edges(w) {
            let cand = graph.edge(e).time.max(t + 1);
            if !settled[u] && opt[u].is_none_or(|x| cand < x) {
                opt[u] = Some(cand);
                tree_edge[u] = Some(e);
                heap.push(Reverse((cand, u)));
            }
        }
    }

    let mut reason = None;
    for d in demands {
        match opt[d.target] {
            None => {
                reason.get_or_insert(NoReason::StaticallyUnreachable);
            }
            Some(t) if t > d.deadline => {
                reason.get_or_insert(NoReason::DeadlineUnsatisfiable);
            }
            Some(_) => {}
        }
    }
    let result = match reason {
        Some(r) => SolveResult::No(r),
        None => {
            let mut w = Delaying::identity(graph);
            for (u, e) in tree_edge.iter().enumerate() {
                if let (Some(e), Some(t)) = (e, opt[u]) {
                    w.set(*e, t);
                }
            }
            SolveResult::certified(instance, w)
        }
    };
    Ok(Solved {
        result,
        algorithm: Algorithm::SingleSource,
        stats: SearchStats { branches: 1, states },
    })
}
