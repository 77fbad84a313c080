//! Seeded random instance generators.
//!
//! All randomness comes from one `ChaCha8Rng` seeded by the caller, so the
//! same parameters and seed always produce the same instance.

use std::collections::BTreeSet;

use delaybetter_core::model::{Demand, GraphBuilder, Instance, TemporalGraph, Time, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    /// `m` distinct edges chosen uniformly.
    Random,
    /// A uniformly grown spanning tree on `n` vertices.
    Tree,
    /// A spanning tree plus at most `rho` extra edges.
    LowFes,
    /// Like `random`, with every time and deadline in {1, 2}.
    Lifetime2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub kind: GenKind,
    pub n: usize,
    /// Edge count for `random` and `lifetime2`; ignored otherwise.
    pub m: usize,
    pub demands: usize,
    /// Initial labels are drawn from `1..=tmax`.
    pub tmax: Time,
    /// Deadlines are drawn from `1..=max_deadline` (default `2·tmax`).
    pub max_deadline: Option<Time>,
    pub directed: bool,
    pub delta: Option<Time>,
    /// Emit Path-DB demands along random simple paths.
    pub paths: bool,
    /// Feedback edge bound for `low-fes`.
    pub rho: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            kind: GenKind::Random,
            n: 5,
            m: 6,
            demands: 2,
            tmax: 4,
            max_deadline: None,
            directed: false,
            delta: None,
            paths: false,
            rho: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("INFEASIBLE: {0}")]
pub struct GenError(pub String);

fn pair_count(n: usize, directed: bool) -> usize {
    let p = n * n.saturating_sub(1);
    if directed {
        p
    } else {
        p / 2
    }
}

/// Distinct vertex pairs, oriented when `directed`.
struct EdgeSet {
    directed: bool,
    used: BTreeSet<(usize, usize)>,
    list: Vec<(usize, usize)>,
}

impl EdgeSet {
    fn insert(&mut self, u: usize, v: usize) -> bool {
        let key = if self.directed || u < v { (u, v) } else { (v, u) };
        if u == v || !self.used.insert(key) {
            return false;
        }
        self.list.push((u, v));
        true
    }
}

pub fn generate(p: &GenParams, seed: u64) -> Result<Instance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.n;
    if n == 0 {
        return Err(GenError("n must be at least 1".into()));
    }
    if p.tmax == 0 {
        return Err(GenError("tmax must be at least 1".into()));
    }
    if p.delta.is_some() && p.paths {
        return Err(GenError("delta cannot be combined with path demands".into()));
    }
    let max_pairs = pair_count(n, p.directed);
    let mut es = EdgeSet {
        directed: p.directed,
        used: BTreeSet::new(),
        list: Vec::new(),
    };
    let (tmax, max_deadline) = match p.kind {
        GenKind::Lifetime2 => (2, 2),
        _ => (p.tmax, p.max_deadline.unwrap_or(2 * p.tmax)),
    };
    if max_deadline == 0 {
        return Err(GenError("max deadline must be at least 1".into()));
    }
    match p.kind {
        GenKind::Random | GenKind::Lifetime2 => {
            if p.m > max_pairs {
                return Err(GenError(format!("m = {} exceeds the {max_pairs} available vertex pairs", p.m)));
            }
            let mut all: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| if p.directed { u != v } else { u < v })
                .collect();
            all.shuffle(&mut rng);
            for &(u, v) in all.iter().take(p.m) {
                if p.directed || rng.gen_bool(0.5) {
                    es.insert(u, v);
                } else {
                    es.insert(v, u);
                }
            }
        }
        GenKind::Tree | GenKind::LowFes => {
            for v in 1..n {
                let u = rng.gen_range(0..v);
                if rng.gen_bool(0.5) {
                    es.insert(u, v);
                } else {
                    es.insert(v, u);
                }
            }
            if p.kind == GenKind::LowFes {
                let room = max_pairs - (n - 1);
                if p.rho > room {
                    return Err(GenError(format!("rho = {} exceeds the {room} pairs left after a spanning tree", p.rho)));
                }
                let extra = rng.gen_range(0..=p.rho);
                while es.list.len() < n - 1 + extra {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    es.insert(u, v);
                }
            }
        }
    }

    let mut b = GraphBuilder::new(p.directed);
    for v in 0..n {
        b.add_vertex(format!("v{v}"));
    }
    for &(u, v) in &es.list {
        b.add_edge(u, v, rng.gen_range(1..=tmax));
    }
    let graph = b.build().map_err(|e| GenError(e.to_string()))?;

    if p.paths {
        let mut demands = Vec::with_capacity(p.demands);
        let mut seqs = Vec::with_capacity(p.demands);
        for _ in 0..p.demands {
            let seq = random_simple_path(&graph, &mut rng)
                .ok_or_else(|| GenError("path demands need at least one edge".into()))?;
            demands.push(Demand::new(seq[0], *seq.last().unwrap(), rng.gen_range(1..=max_deadline)));
            seqs.push(seq);
        }
        return Instance::path_delay_better(graph, demands, seqs).map_err(|e| GenError(e.to_string()));
    }

    let demands = (0..p.demands)
        .map(|_| {
            let s = rng.gen_range(0..n);
            let t = if n > 1 {
                let t = rng.gen_range(0..n - 1);
                t + usize::from(t >= s)
            } else {
                s
            };
            Demand::new(s, t, rng.gen_range(1..=max_deadline))
        })
        .collect();
    match p.delta {
        Some(d) => Instance::delta_delay_better(graph, demands, d),
        None => Instance::delay_better(graph, demands),
    }
    .map_err(|e| GenError(e.to_string()))
}

/// A random walk that never revisits a vertex, of random target length.
fn random_simple_path(graph: &TemporalGraph, rng: &mut ChaCha8Rng) -> Option<Vec<VertexId>> {
    let starts: Vec<VertexId> = (0..graph.vertex_count()).filter(|&v| !graph.out_edges(v).is_empty()).collect();
    let mut x = *starts.choose(rng)?;
    let want = rng.gen_range(1..graph.vertex_count());
    let mut seq = vec![x];
    while seq.len() <= want {
        let next: Vec<VertexId> = graph
            .out_edges(x)
            .iter()
            .map(|&(_, y)| y)
            .filter(|y| !seq.contains(y))
            .collect();
        match next.choose(rng) {
            Some(&y) => {
                seq.push(y);
                x = y;
            }
            None => break,
        }
    }
    Some(seq)
}
