//! Enumeration helpers shared by the integration tests.
#![allow(dead_code)]

use delaybetter_core::model::{Delaying, Demand, GraphBuilder, Instance, TemporalGraph, Time, VertexId};
use delaybetter_core::reach::verify;

/// Every connected undirected graph with 1 to 4 edges, up to isomorphism.
pub fn connected_shapes() -> Vec<Vec<(usize, usize)>> {
    vec![
        vec![(0, 1)],
        vec![(0, 1), (1, 2)],
        vec![(0, 1), (1, 2), (2, 3)],
        vec![(0, 1), (0, 2), (0, 3)],
        vec![(0, 1), (1, 2), (2, 0)],
        vec![(0, 1), (1, 2), (2, 3), (3, 4)],
        vec![(0, 1), (0, 2), (0, 3), (3, 4)],
        vec![(0, 1), (0, 2), (0, 3), (0, 4)],
        vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        vec![(0, 1), (1, 2), (2, 0), (2, 3)],
    ]
}

/// Every orientation of `shape` when directed, the shape itself otherwise.
pub fn orientations(shape: &[(usize, usize)], directed: bool) -> Vec<Vec<(usize, usize)>> {
    if !directed {
        return vec![shape.to_vec()];
    }
    (0..1u32 << shape.len())
        .map(|mask| {
            shape
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| if mask >> i & 1 == 1 { (v, u) } else { (u, v) })
                .collect()
        })
        .collect()
}

pub fn vertex_count(edges: &[(usize, usize)]) -> usize {
    edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0)
}

pub fn graph(directed: bool, n: usize, edges: &[(usize, usize)], labels: &[Time]) -> TemporalGraph {
    let mut b = GraphBuilder::new(directed);
    for v in 0..n {
        b.add_vertex(format!("v{v}"));
    }
    for (&(u, v), &t) in edges.iter().zip(labels) {
        b.add_edge(u, v, t);
    }
    b.build().unwrap()
}

/// Calls `f` with every vector in `[lo, hi]^len`, last coordinate fastest.
pub fn for_each_tuple(len: usize, lo: Time, hi: Time, mut f: impl FnMut(&[Time])) {
    let mut t = vec![lo; len];
    loop {
        f(&t);
        let mut k = len;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if t[k] < hi {
                t[k] += 1;
                break;
            }
            t[k] = lo;
        }
    }
}

/// All simple paths with at least one edge, as vertex sequences.
pub fn simple_paths(g: &TemporalGraph) -> Vec<Vec<VertexId>> {
    fn walk(g: &TemporalGraph, path: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        let x = *path.last().unwrap();
        for &(_, y) in g.out_edges(x) {
            if !path.contains(&y) {
                path.push(y);
                out.push(path.clone());
                walk(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..g.vertex_count() {
        walk(g, &mut vec![s], &mut out);
    }
    out
}

/// All delayings with labels in `[λ(e), cap_e]`, where `cap_e` respects δ,
/// that `verify` accepts.
pub fn feasible_delayings(instance: &Instance, cap: Time) -> Vec<Vec<Time>> {
    let g = instance.graph();
    let m = g.edge_count();
    let low = g.labels();
    let high: Vec<Time> = low
        .iter()
        .map(|&l| instance.delta().map_or(cap, |d| cap.min(l + d)).max(l))
        .collect();
    let mut out = Vec::new();
    let mut labels = low.clone();
    fn rec(i: &Instance, k: usize, low: &[Time], high: &[Time], labels: &mut Vec<Time>, out: &mut Vec<Vec<Time>>) {
        if k == labels.len() {
            if verify(i, &Delaying::new(labels.clone())).accepted() {
                out.push(labels.clone());
            }
            return;
        }
        for t in low[k]..=high[k] {
            labels[k] = t;
            rec(i, k + 1, low, high, labels, out);
        }
    }
    if m > 0 {
        rec(instance, 0, &low, &high, &mut labels, &mut out);
    } else if verify(instance, &Delaying::new(vec![])).accepted() {
        out.push(vec![]);
    }
    out
}

/// Exact answer by plain enumeration of every bounded delaying.
pub fn enumerated_answer(instance: &Instance) -> bool {
    let cap = instance.t_max().max(instance.t_init());
    !feasible_delayings(instance, cap).is_empty()
}

pub fn demand(s: VertexId, t: VertexId, deadline: Time) -> Demand {
    Demand::new(s, t, deadline)
}
