//! δ-DelayBetter and DelayBetter reduce to each other.
//!
//! DB to δ-DB is trivial: δ = T_max allows every useful delay. The other
//! direction replaces each live time-edge by a gadget whose demands pin the
//! edge to its allowed window `[λ, λ + δ]`.
//!
//! In both δ-to-DB outputs, edge `e` of the source instance keeps id `e`:
//! the original edge itself (undirected) or its first-half edge (directed).
//! Edges whose label exceeds `T_max` are useless and are copied without a
//! gadget.

use alloc::format;
use alloc::vec::Vec;

use crate::model::{Delaying, Instance, ProblemKind, Time};

use super::{Emitter, ReductionError, ReductionOutput, Source};

fn expect_delta(instance: &Instance) -> Result<Time, ReductionError> {
    match (instance.kind(), instance.delta()) {
        (ProblemKind::DeltaDelayBetter, Some(d)) => Ok(d),
        _ => Err(ReductionError::WrongKind { expected: "DELTA_DB" }),
    }
}

/// The same graph and demands with `δ = T_max`. Witnesses carry over as is.
pub fn reduce_db_to_delta(instance: &Instance) -> Result<Instance, ReductionError> {
    if instance.kind() != ProblemKind::DelayBetter {
        return Err(ReductionError::WrongKind { expected: "DB" });
    }
    instance
        .with_delta(Some(instance.t_max()))
        .map_err(ReductionError::NameCollision)
}

fn gadget_name(e: usize, part: &str) -> alloc::string::String {
    format!("e{e}#{part}")
}

/// Undirected δ-DB to DB.
///
/// Times shift up by one. A live edge `(u,v)` at shifted time `t` gets
/// `3δ + 2` new vertices: `uv_i` for `i ∈ [t, t+δ]`, `u_j` and `v_j` for
/// `j ∈ [1, δ]`, and `v′`. Each `uv_i` is joined to `u` and to every `u_j`
/// at time `i − 1`; `u_j – v_j`, `v_j – v′` and `v – v′` start at 1. Demand
/// `(uv_i, v′, i + 1)` needs a three-edge path at exactly `i − 1, i, i + 1`,
/// either through `u – v` or through one bypass `u_j – v_j`. The `δ + 1`
/// demands end on distinct edges into `v′` and only `δ` bypasses exist, so
/// exactly one demand crosses `u – v`, which therefore lies in `[t, t+δ]`.
pub fn reduce_delta_to_db_undirected(instance: &Instance) -> Result<ReductionOutput, ReductionError> {
    let delta = expect_delta(instance)?;
    let graph = instance.graph();
    if graph.is_directed() {
        return Err(ReductionError::DirectedInput);
    }
    let t_max = instance.t_max();
    let mut em = Emitter::new(false);
    for (v, name) in graph.vertex_names().iter().enumerate() {
        em.vertex(name.clone(), "original", Source::Vertex(v));
    }
    for (e, edge) in graph.edges().iter().enumerate() {
        let role = if edge.time <= t_max { "original" } else { "dead" };
        em.edge(edge.u, edge.v, edge.time + 1, role, Source::Edge(e));
    }
    for (e, edge) in graph.edges().iter().enumerate() {
        if edge.time > t_max {
            continue;
        }
        let src = Source::Edge(e);
        let t = edge.time + 1;
        let uv: Vec<_> = (t..=t + delta)
            .map(|i| em.vertex(gadget_name(e, &format!("uv{i}")), "window", src))
            .collect();
        let us: Vec<_> = (1..=delta)
            .map(|j| em.vertex(gadget_name(e, &format!("u{j}")), "bypass", src))
            .collect();
        let vs: Vec<_> = (1..=delta)
            .map(|j| em.vertex(gadget_name(e, &format!("v{j}")), "bypass", src))
            .collect();
        let sink = em.vertex(gadget_name(e, "v'"), "sink", src);
        for (k, &w) in uv.iter().enumerate() {
            let i = t + k as Time;
            em.edge(w, edge.u, i - 1, "feeder", src);
            for &uj in &us {
                em.edge(w, uj, i - 1, "feeder", src);
            }
        }
        for (&uj, &vj) in us.iter().zip(&vs) {
            em.edge(uj, vj, 1, "bypass", src);
            em.edge(vj, sink, 1, "bypass", src);
        }
        em.edge(edge.v, sink, 1, "sink", src);
        for (k, &w) in uv.iter().enumerate() {
            let i = t + k as Time;
            em.demand(w, sink, i + 1, "window", src);
        }
    }
    for (k, d) in instance.demands().iter().enumerate() {
        em.demand(d.source, d.target, d.deadline + 1, "traveler", Source::Demand(k));
    }
    em.finish(None)
}

/// A δ-DB witness of the undirected reduction's source, lifted from a DB
/// witness of its output.
pub fn lift_db_witness_undirected(source: &Instance, witness: &Delaying) -> Delaying {
    let t_max = source.t_max();
    Delaying::new(
        source
            .graph()
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| {
                if edge.time <= t_max {
                    witness.get(e) - 1
                } else {
                    edge.time
                }
            })
            .collect(),
    )
}

/// A DB witness of the undirected output, built from a δ-DB witness of the
/// source: the demand whose window matches the delayed edge crosses it,
/// the others take one bypass each.
pub fn delta_witness_to_db_undirected(source: &Instance, out: &ReductionOutput, witness: &Delaying) -> Delaying {
    let g = out.instance.graph();
    let delta = source.delta().unwrap_or(0);
    let t_max = source.t_max();
    let mut labels = g.labels();
    let find = |a: &str, b: &str| g.find_edge_by_name(a, b).expect("gadget edge exists");
    for (e, edge) in source.graph().edges().iter().enumerate() {
        labels[e] = witness.get(e) + 1;
        if edge.time > t_max {
            continue;
        }
        let t = edge.time + 1;
        let direct = witness.get(e) + 1;
        let v = source.graph().name(edge.v);
        let sink = gadget_name(e, "v'");
        labels[find(v, &sink)] = direct + 1;
        let mut j = 0;
        for i in t..=t + delta {
            if i == direct {
                continue;
            }
            j += 1;
            let (uv, uj, vj) = (
                gadget_name(e, &format!("uv{i}")),
                gadget_name(e, &format!("u{j}")),
                gadget_name(e, &format!("v{j}")),
            );
            labels[find(&uv, &uj)] = i - 1;
            labels[find(&uj, &vj)] = i;
            labels[find(&vj, &sink)] = i + 1;
        }
    }
    Delaying::new(labels)
}

/// Directed δ-DB to DB.
///
/// Times double. A live edge `(u,v,t)` becomes `u → uv → v` with the
/// first half at `2t` and the second half at `2t + 1`. A hermit demand
/// `(u′, v′, 2t + 2δ + 1)` runs `u′ → u → uv → v′`, whose last edge starts
/// at `2t + 2δ + 1`, so the first half can be delayed to at most
/// `2t + 2δ`. Travelers keep their endpoints with deadline `2d + 1`, the
/// time at which a second half can land on the doubled deadline.
pub fn reduce_delta_to_db_directed(instance: &Instance) -> Result<ReductionOutput, ReductionError> {
    let delta = expect_delta(instance)?;
    let graph = instance.graph();
    if !graph.is_directed() {
        return Err(ReductionError::UndirectedInput);
    }
    let t_max = instance.t_max();
    let mut em = Emitter::new(true);
    for (v, name) in graph.vertex_names().iter().enumerate() {
        em.vertex(name.clone(), "original", Source::Vertex(v));
    }
    let mids: Vec<_> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let src = Source::Edge(e);
            if edge.time > t_max {
                em.edge(edge.u, edge.v, 2 * edge.time, "dead", src);
                None
            } else {
                let mid = em.vertex(gadget_name(e, "uv"), "midpoint", src);
                em.edge(edge.u, mid, 2 * edge.time, "first-half", src);
                Some(mid)
            }
        })
        .collect();
    for (e, edge) in graph.edges().iter().enumerate() {
        let Some(mid) = mids[e] else { continue };
        let src = Source::Edge(e);
        let t = edge.time;
        let head = em.vertex(gadget_name(e, "u'"), "hermit", src);
        let tail = em.vertex(gadget_name(e, "v'"), "hermit", src);
        em.edge(mid, edge.v, 2 * t + 1, "second-half", src);
        em.edge(head, edge.u, 1, "trailhead", src);
        em.edge(mid, tail, 2 * t + 2 * delta + 1, "exit", src);
        em.demand(head, tail, 2 * t + 2 * delta + 1, "hermit", src);
    }
    for (k, d) in instance.demands().iter().enumerate() {
        em.demand(d.source, d.target, 2 * d.deadline + 1, "traveler", Source::Demand(k));
    }
    em.finish(None)
}

/// A δ-DB witness of the directed reduction's source: each edge takes half
/// its first-half time, rounded up.
pub fn lift_db_witness_directed(source: &Instance, witness: &Delaying) -> Delaying {
    let t_max = source.t_max();
    Delaying::new(
        source
            .graph()
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| {
                if edge.time <= t_max {
                    witness.get(e).div_ceil(2)
                } else {
                    edge.time
                }
            })
            .collect(),
    )
}

/// A DB witness of the directed output: halves at `2λ′` and `2λ′ + 1`,
/// everything else at its initial time.
pub fn delta_witness_to_db_directed(source: &Instance, out: &ReductionOutput, witness: &Delaying) -> Delaying {
    let g = out.instance.graph();
    let t_max = source.t_max();
    let mut labels = g.labels();
    for (e, edge) in source.graph().edges().iter().enumerate() {
        labels[e] = 2 * witness.get(e);
        if edge.time <= t_max {
            let second = g
                .find_edge_by_name(&gadget_name(e, "uv"), source.graph().name(edge.v))
                .expect("second half exists");
            labels[second] = 2 * witness.get(e) + 1;
        }
    }
    Delaying::new(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Demand, TemporalGraph};
    use crate::reach::verify;
    use alloc::vec;

    fn one_edge(directed: bool, delta: Time) -> Instance {
        let g = TemporalGraph::new(directed, &["u", "v"], &[("u", "v", 1)]).unwrap();
        Instance::delta_delay_better(g, vec![Demand::new(0, 1, 2)], delta).unwrap()
    }

    #[test]
    fn undirected_gadget_counts() {
        let i = one_edge(false, 1);
        let out = reduce_delta_to_db_undirected(&i).unwrap();
        let g = out.instance.graph();
        assert_eq!(g.vertex_count(), 2 + 5);
        assert_eq!(out.demands.iter().filter(|o| o.role == "window").count(), 2);
        assert!(out.instance.t_max() <= i.t_max() + 1 + 2);
    }

    #[test]
    fn undirected_forward_and_back() {
        let i = one_edge(false, 2);
        let out = reduce_delta_to_db_undirected(&i).unwrap();
        for x in 0..=1 {
            let w = Delaying::new(vec![1 + x]);
            assert!(verify(&i, &w).accepted());
            let big = delta_witness_to_db_undirected(&i, &out, &w);
            assert!(verify(&out.instance, &big).accepted(), "delay {x}");
            assert_eq!(lift_db_witness_undirected(&i, &big), w);
        }
    }

    #[test]
    fn directed_forward_and_back() {
        let i = one_edge(true, 1);
        let out = reduce_delta_to_db_directed(&i).unwrap();
        assert!(out.instance.t_max() <= 2 * i.t_max() + 2 + 1);
        for x in 0..=1 {
            let w = Delaying::new(vec![1 + x]);
            let big = delta_witness_to_db_directed(&i, &out, &w);
            assert!(verify(&out.instance, &big).accepted(), "delay {x}");
            assert_eq!(lift_db_witness_directed(&i, &big), w);
        }
    }

    #[test]
    fn orientation_checked() {
        assert_eq!(
            reduce_delta_to_db_undirected(&one_edge(true, 1)),
            Err(ReductionError::DirectedInput)
        );
        assert_eq!(
            reduce_delta_to_db_directed(&one_edge(false, 1)),
            Err(ReductionError::UndirectedInput)
        );
    }

    #[test]
    fn db_to_delta_uses_t_max() {
        let g = TemporalGraph::new(true, &["u", "v"], &[("u", "v", 1)]).unwrap();
        let i = Instance::delay_better(g, vec![Demand::new(0, 1, 7)]).unwrap();
        assert_eq!(reduce_db_to_delta(&i).unwrap().delta(), Some(7));
    }
}
