//! Property tests against independent enumeration oracles.

use std::collections::BTreeMap;

use delaybetter_core::model::{Delaying, Demand, GraphBuilder, Instance, TemporalGraph, Time, VertexId};
use delaybetter_core::pathdb::solve_path_db;
use delaybetter_core::reach::{compress_lifetime, earliest_arrivals, verify};
use delaybetter_core::reductions::{
    cube_graph, reduce_cbpepe_to_delta_db, reduce_db_to_delta, reduce_nae_to_db_directed, reduce_nae_to_db_undirected,
    Color, NaeFormula, PlanarVariant, Source,
};
use delaybetter_core::solvers::{candidates, solve, solve_brute_force, solve_with, Algorithm, SolverConfig};
use proptest::prelude::*;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn brute_yes(i: &Instance) -> bool {
    solve_brute_force(i, None, &cfg()).unwrap().result.is_yes()
}

/// A random graph shape: orientation, vertex count and distinct vertex pairs.
#[derive(Debug, Clone)]
struct Shape {
    directed: bool,
    n: usize,
    pairs: Vec<(usize, usize)>,
}

fn shape(max_edges: usize) -> impl Strategy<Value = Shape> {
    (any::<bool>(), 2usize..=5).prop_flat_map(move |(directed, n)| {
        let all: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| if directed { u != v } else { u < v })
            .collect();
        let k = max_edges.min(all.len());
        proptest::sample::subsequence(all, 1..=k).prop_map(move |pairs| Shape { directed, n, pairs })
    })
}

fn build(s: &Shape, labels: &[Time]) -> TemporalGraph {
    let mut b = GraphBuilder::new(s.directed);
    for v in 0..s.n {
        b.add_vertex(format!("v{v}"));
    }
    for (&(u, v), &t) in s.pairs.iter().zip(labels) {
        b.add_edge(u, v, t);
    }
    b.build().unwrap()
}

/// A DB or δ-DB instance with bounded labels and deadlines.
fn instance(max_edges: usize, max_label: Time, max_deadline: Time, delta: bool) -> impl Strategy<Value = Instance> {
    shape(max_edges).prop_flat_map(move |s| {
        let m = s.pairs.len();
        let n = s.n;
        (
            Just(s),
            prop::collection::vec(1..=max_label, m),
            prop::collection::vec((0..n, 0..n, 1..=max_deadline), 1..=3),
            if delta { prop::option::of(0..=3u64).boxed() } else { Just(None).boxed() },
        )
            .prop_map(|(s, labels, ds, delta)| {
                let g = build(&s, &labels);
                let ds = ds.into_iter().map(|(a, b, d)| Demand::new(a, b, d)).collect();
                match delta {
                    Some(d) => Instance::delta_delay_better(g, ds, d).unwrap(),
                    None => Instance::delay_better(g, ds).unwrap(),
                }
            })
    })
}

/// Earliest arrival by enumerating every simple path with increasing times.
fn enumerated_arrivals(g: &TemporalGraph, labels: &[Time], s: VertexId) -> Vec<Option<Time>> {
    fn walk(g: &TemporalGraph, labels: &[Time], x: VertexId, a: Time, seen: &mut Vec<bool>, best: &mut Vec<Option<Time>>) {
        for &(e, y) in g.out_edges(x) {
            let t = labels[e];
            if t > a && !seen[y] {
                if best[y].is_none_or(|b| t < b) {
                    best[y] = Some(t);
                }
                seen[y] = true;
                walk(g, labels, y, t, seen, best);
                seen[y] = false;
            }
        }
    }
    let mut best = vec![None; g.vertex_count()];
    best[s] = Some(0);
    let mut seen = vec![false; g.vertex_count()];
    seen[s] = true;
    walk(g, labels, s, 0, &mut seen, &mut best);
    best
}

/// The definition of a valid (δ-)delaying, checked by path enumeration.
fn oracle_accepts(i: &Instance, cand: &[Time]) -> bool {
    let g = i.graph();
    let bounded = g
        .edges()
        .iter()
        .zip(cand)
        .all(|(e, &t)| t >= e.time && i.delta().is_none_or(|d| t <= e.time + d));
    bounded
        && i.demands().iter().all(|d| {
            enumerated_arrivals(g, cand, d.source)[d.target].is_some_and(|a| a <= d.deadline)
        })
}

fn tuples(len: usize, lo: Time, hi: Time) -> Vec<Vec<Time>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, ..ProptestConfig::default() })]

    #[test]
    fn earliest_arrivals_match_path_enumeration(
        s in shape(5),
        raw in prop::collection::vec(1..=6u64, 5),
        src in 0usize..5,
    ) {
        let labels = &raw[..s.pairs.len()];
        let g = build(&s, labels);
        let src = src % s.n;
        let table = earliest_arrivals(&g, labels, src);
        prop_assert_eq!(table.arrivals(), &enumerated_arrivals(&g, labels, src)[..]);
    }

    #[test]
    fn verify_matches_the_definition(i in instance(4, 4, 4, true)) {
        for cand in tuples(i.graph().edge_count(), 1, 4) {
            let got = verify(&i, &Delaying::new(cand.clone())).accepted();
            prop_assert_eq!(got, oracle_accepts(&i, &cand), "candidate {:?}", cand);
        }
    }

    #[test]
    fn brute_force_matches_plain_enumeration(i in instance(4, 4, 4, true)) {
        let cap = i.t_max().max(i.t_init());
        let any = tuples(i.graph().edge_count(), 1, cap).iter().any(|c| oracle_accepts(&i, c));
        prop_assert_eq!(brute_yes(&i), any);
    }


    #[test]
    fn raising_a_deadline_keeps_yes(i in instance(5, 4, 5, true), k in 0usize..3, extra in 1u64..4) {
        prop_assume!(brute_yes(&i));
        let k = k % i.demands().len();
        let mut ds = i.demands().to_vec();
        ds[k].deadline += extra;
        let raised = i.with_graph(i.graph().clone(), ds).unwrap();
        prop_assert!(brute_yes(&raised));
    }

    #[test]
    fn delta_at_t_max_equals_db(i in instance(5, 4, 5, false)) {
        let as_delta = reduce_db_to_delta(&i).unwrap();
        prop_assert_eq!(as_delta.delta(), Some(i.t_max()));
        prop_assert_eq!(brute_yes(&as_delta), brute_yes(&i));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, ..ProptestConfig::default() })]

    #[test]
    fn every_applicable_engine_agrees_with_brute_force(i in instance(7, 5, 6, true)) {
        let truth = brute_yes(&i);
        let s = solve(&i, &cfg()).unwrap();
        prop_assert_eq!(s.result.is_yes(), truth, "dispatcher via {}", s.algorithm);
        for a in candidates(&i) {
            let r = solve_with(&i, Some(a), &cfg()).unwrap().result;
            prop_assert_eq!(r.is_yes(), truth, "engine {}", a);
            if let Some(w) = r.witness() {
                prop_assert!(verify(&i, w).accepted(), "engine {}", a);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn compression_preserves_answers(i in instance(5, 50, 50, true)) {
        let c = compress_lifetime(&i);
        let small = &c.instance;
        prop_assert!(small.t_init() <= small.t_max().max(1));
        let before = solve_with(&i, Some(Algorithm::RouteSearch), &cfg()).unwrap().result.is_yes();
        let after = brute_yes(small);
        prop_assert_eq!(before, after);
        if let Some(w) = solve_brute_force(small, None, &cfg()).unwrap().result.witness() {
            prop_assert!(verify(&i, &c.lift(&i, w)).accepted());
        }
    }
}

/// Path-DB instances built from random simple paths of a random graph.
fn path_instance() -> impl Strategy<Value = Instance> {
    (shape(6), prop::collection::vec(1..=4u64, 6), prop::collection::vec((any::<prop::sample::Index>(), 1..=6u64), 1..=3))
        .prop_filter_map("graph without paths", |(s, raw, picks)| {
            let g = build(&s, &raw[..s.pairs.len()]);
            let mut all = Vec::new();
            fn walk(g: &TemporalGraph, p: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
                let x = *p.last().unwrap();
                for &(_, y) in g.out_edges(x) {
                    if !p.contains(&y) {
                        p.push(y);
                        out.push(p.clone());
                        walk(g, p, out);
                        p.pop();
                    }
                }
            }
            for v in 0..g.vertex_count() {
                walk(&g, &mut vec![v], &mut all);
            }
            if all.is_empty() {
                return None;
            }
            let chosen: Vec<Vec<VertexId>> = picks.iter().map(|(ix, _)| ix.get(&all).clone()).collect();
            let ds = chosen
                .iter()
                .zip(&picks)
                .map(|(p, &(_, d))| Demand::new(p[0], *p.last().unwrap(), d))
                .collect();
            Some(Instance::path_delay_better(g, ds, chosen).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, ..ProptestConfig::default() })]

    #[test]
    fn pathdb_matches_brute_force_and_is_idempotent(i in path_instance()) {
        let r = solve_path_db(&i).unwrap().result;
        prop_assert_eq!(r.is_yes(), brute_yes(&i));
        if let Some(w) = r.witness() {
            let again = i.with_graph(i.graph().relabeled(w.labels()), i.demands().to_vec()).unwrap();
            let r2 = solve_path_db(&again).unwrap().result;
            prop_assert_eq!(r2.witness(), Some(w));
        }
    }
}

/// A bold edge `x → y` at time `t`, forced by a chain of `t − 1` fresh
/// vertices into `x` and the demand from the chain's start to `y` by `t`.
fn add_bold(b: &mut GraphBuilder, demands: &mut Vec<Demand>, x: &str, y: &str, t: Time) -> Vec<usize> {
    let mut chain: Vec<String> = (1..t).map(|k| format!("{x}>{y}.{k}")).collect();
    chain.push(x.to_string());
    let mut ids = Vec::new();
    for w in chain.windows(2) {
        ids.push(b.edge(&w[0], &w[1], 1));
    }
    ids.push(b.edge(x, y, 1));
    let start = b.vertex(&chain[0]);
    let end = b.vertex(y);
    demands.push(Demand::new(start, end, t));
    ids
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn bold_gadgets_are_rigid(directed in any::<bool>(), t1 in 1u64..=4, t2 in 1u64..=4, deadline in 1u64..=8) {
        let mut b = GraphBuilder::new(directed);
        for v in ["x", "y", "z"] {
            b.add_vertex(v);
        }
        let mut ds = Vec::new();
        let first = add_bold(&mut b, &mut ds, "x", "y", t1);
        let second = add_bold(&mut b, &mut ds, "y", "z", t2);
        ds.push(Demand::new(0, 2, deadline));
        let i = Instance::delay_better(b.build().unwrap(), ds).unwrap();
        let r = solve_brute_force(&i, None, &cfg()).unwrap().result;
        prop_assert_eq!(r.is_yes(), t2 > t1 && t2 <= deadline);
        if let Some(w) = r.witness() {
            for ids in [first, second] {
                for (k, &e) in ids.iter().enumerate() {
                    prop_assert_eq!(w.get(e), k as Time + 1);
                }
            }
        }
    }

    #[test]
    fn nae_size_formulas(n in 3usize..8, raw in prop::collection::vec(prop::sample::subsequence((0..8).collect::<Vec<usize>>(), 3), 1..5)) {
        let clauses: Vec<[usize; 3]> = raw
            .iter()
            .filter(|c| c.iter().all(|&x| x < n))
            .map(|c| [c[0], c[1], c[2]])
            .collect();
        let m = clauses.len();
        let f = NaeFormula::new(n, clauses).unwrap();
        let u = reduce_nae_to_db_undirected(&f).unwrap().instance;
        prop_assert_eq!(u.graph().vertex_count(), 4 + 3 * n + 2 * m);
        prop_assert_eq!(u.graph().edge_count(), 2 + 6 * n + 4 * m);
        prop_assert_eq!(u.demands().len(), 2 + 6 * n + 3 * m);
        let d = reduce_nae_to_db_directed(&f).unwrap().instance;
        prop_assert_eq!(d.graph().vertex_count(), 2 + 6 * n + m);
        prop_assert_eq!(d.graph().edge_count(), 10 * n + 6 * m);
        prop_assert_eq!(d.demands().len(), 3 * n + 2 * m);
    }

    #[test]
    fn planar_edge_gadget_sizes(mask in 0u32..(1 << 12), colors in prop::collection::vec(0usize..3, 12)) {
        let base = cube_graph(BTreeMap::new());
        let mut precolor = BTreeMap::new();
        for (k, &(a, b)) in base.edges().iter().enumerate() {
            if mask >> k & 1 == 1 {
                precolor.insert((a, b), Color::ALL[colors[k]]);
            }
        }
        let g = cube_graph(precolor.clone());
        let out = reduce_cbpepe_to_delta_db(&g, PlanarVariant::DeltaTen, false).unwrap();
        let mut per_edge: BTreeMap<usize, usize> = BTreeMap::new();
        for o in out.vertices.iter().filter(|o| o.role == "edge-gadget") {
            if let Source::Edge(k) = o.source {
                *per_edge.entry(k).or_default() += 1;
            }
        }
        for (k, &(a, b)) in g.edges().iter().enumerate() {
            let want = if g.precolor(a, b).is_some() { 1 } else { 3 };
            prop_assert_eq!(per_edge.get(&k).copied().unwrap_or(0), want);
        }
        let gr = out.instance.graph();
        prop_assert!((0..gr.vertex_count()).all(|v| gr.degree(v) <= 10));
    }
}

/// No feasible delaying of the directed NAE construction delays both hub
/// edges of one variable.
#[test]
fn directed_nae_hub_edges_exclude_each_other() {
    let mut formulas = vec![NaeFormula::new(3, vec![]).unwrap()];
    for c in [[0, 1, 2], [0, 0, 1], [2, 1, 0]] {
        formulas.push(NaeFormula::new(3, vec![c]).unwrap());
    }
    for f in &formulas {
        let out = reduce_nae_to_db_directed(f).unwrap();
        let g = out.instance.graph();
        for x in 0..3 {
            let st = g.find_edge_by_name(&format!("x{x}.sT"), "T").unwrap();
            let sf = g.find_edge_by_name(&format!("x{x}.sF"), "F").unwrap();
            let mut labels = g.labels();
            labels[st] = 2;
            labels[sf] = 2;
            let forced = out.instance.with_graph(g.relabeled(&labels), out.instance.demands().to_vec()).unwrap();
            let r = solve_brute_force(&forced, Some(2), &cfg()).unwrap().result;
            assert!(!r.is_yes(), "variable {x} of {:?}", f.clauses());
        }
        // Without the pin the instance is solvable whenever the formula is.
        assert!(solve_brute_force(&out.instance, Some(2), &cfg()).unwrap().result.is_yes());
    }
}

#[test]
fn directed_nae_output_is_acyclic() {
    let f = NaeFormula::new(4, vec![[0, 1, 2], [1, 2, 3]]).unwrap();
    let g = reduce_nae_to_db_directed(&f).unwrap().instance.graph().clone();
    // Kahn: every vertex must eventually lose all its in-edges.
    let mut indeg = vec![0; g.vertex_count()];
    for e in g.edges() {
        indeg[e.v] += 1;
    }
    let mut stack: Vec<usize> = (0..g.vertex_count()).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(x) = stack.pop() {
        seen += 1;
        for &(_, y) in g.out_edges(x) {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                stack.push(y);
            }
        }
    }
    assert_eq!(seen, g.vertex_count());
}
