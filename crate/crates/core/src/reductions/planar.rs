//! Edge-precoloring extension on cubic bipartite planar graphs to
//! δ-DelayBetter with `T_max = 19`.
//!
//! Each vertex becomes a gadget with three spokes, one per neighbour, each
//! crossing a blue, a red and a green layer. Each edge `(u, v)` with
//! `u ∈ A` becomes up to three parallel bold paths from `u`'s green layer
//! to `v`'s blue layer, one per colour, entering at 7/8, 10/11 or 13/14.
//! Hermits force each gadget to route exactly one spoke per colour window,
//! so travelers `(u, v, 19)` can only pass if the colours of their routes
//! form a proper colouring.
//!
//! The times of the bold edges inside layers (blue chain at 3 and 4 on the
//! A side, 8/9/10, 12/13/14 and 16/17/18 on the B side) and of the bold
//! feeder edges `s → u` (at 1, 4 and 7) are a reconstruction chosen so
//! that the hermit windows work out. They are not canonical; the
//! forward direction is what is verified.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Delaying, Time, VertexId};

use super::{Emitter, ReductionError, ReductionOutput, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    B,
    R,
    G,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::B, Color::R, Color::G];

    /// Position in the B, R, G time windows.
    pub fn index(self) -> Time {
        match self {
            Color::B => 0,
            Color::R => 1,
            Color::G => 2,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::B => 'B',
            Color::R => 'R',
            Color::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Color::ALL.into_iter().find(|x| x.letter() == c)
    }
}

/// A cubic bipartite graph with ordered neighbourhoods and a partial edge
/// colouring. Uncoloured edges are simply absent from the precolouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecoloredCubicGraph {
    names: Vec<String>,
    in_a: Vec<bool>,
    adj: Vec<[usize; 3]>,
    precolor: BTreeMap<(usize, usize), Color>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl PrecoloredCubicGraph {
    /// `adj[v]` lists the neighbours of `v` in order; precolouring keys are
    /// unordered vertex pairs.
    pub fn new(
        names: Vec<String>,
        in_a: Vec<bool>,
        adj: Vec<[usize; 3]>,
        precolor: BTreeMap<(usize, usize), Color>,
    ) -> Result<Self, ReductionError> {
        let n = names.len();
        let bad = |m: String| Err(ReductionError::InvalidInput(m));
        if in_a.len() != n || adj.len() != n {
            return bad(format!("{n} names but {} sides and {} adjacency rows", in_a.len(), adj.len()));
        }
        for (v, nb) in adj.iter().enumerate() {
            for (i, &w) in nb.iter().enumerate() {
                if w >= n {
                    return bad(format!("neighbour {i} of {} is out of range", names[v]));
                }
                if nb[..i].contains(&w) {
                    return bad(format!("{} lists {} twice", names[v], names[w]));
                }
                if in_a[v] == in_a[w] {
                    return bad(format!("{} and {} are on the same side", names[v], names[w]));
                }
                if !adj[w].contains(&v) {
                    return bad(format!("{} lists {} but not vice versa", names[v], names[w]));
                }
            }
        }
        let mut normalized = BTreeMap::new();
        for (&(a, b), &c) in &precolor {
            if a >= n || b >= n || !adj[a].contains(&b) {
                return bad(format!("precoloured pair ({a}, {b}) is not an edge"));
            }
            normalized.insert(key(a, b), c);
        }
        Ok(Self {
            names,
            in_a,
            adj,
            precolor: normalized,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn in_a(&self, v: usize) -> bool {
        self.in_a[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize; 3] {
        &self.adj[v]
    }

    /// Position of `w` among the neighbours of `v`.
    pub fn neighbor_index(&self, v: usize, w: usize) -> usize {
        self.adj[v].iter().position(|&x| x == w).expect("adjacent")
    }

    pub fn precolor(&self, a: usize, b: usize) -> Option<Color> {
        self.precolor.get(&key(a, b)).copied()
    }

    pub fn precoloring(&self) -> &BTreeMap<(usize, usize), Color> {
        &self.precolor
    }

    /// Edges as `(a, b)` with `a ∈ A`, ordered by `a` then by `a`'s
    /// neighbour order. Colourings are indexed the same way.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .filter(|&a| self.in_a[a])
            .flat_map(|a| self.adj[a].iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Whether `coloring` is proper and agrees with the precolouring.
    pub fn check_coloring(&self, coloring: &[Color]) -> Result<(), ReductionError> {
        let edges = self.edges();
        if coloring.len() != edges.len() {
            return Err(ReductionError::ImproperColoring(format!(
                "{} colours for {} edges",
                coloring.len(),
                edges.len()
            )));
        }
        let mut seen: BTreeMap<(usize, Color), usize> = BTreeMap::new();
        for (k, (&(a, b), &c)) in edges.iter().zip(coloring).enumerate() {
            if let Some(p) = self.precolor(a, b) {
                if p != c {
                    return Err(ReductionError::ImproperColoring(format!(
                        "edge {}-{} is precoloured {}",
                        self.names[a],
                        self.names[b],
                        p.letter()
                    )));
                }
            }
            for v in [a, b] {
                if let Some(other) = seen.insert((v, c), k) {
                    let (x, y) = edges[other];
                    return Err(ReductionError::ImproperColoring(format!(
                        "edges {}-{} and {}-{} share {} and colour {}",
                        self.names[x],
                        self.names[y],
                        self.names[a],
                        self.names[b],
                        self.names[v],
                        c.letter()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The 3-cube with the even-parity vertices in A. Neighbour `i` of a
/// vertex differs from it in bit `i`.
pub fn cube_graph(precolor: BTreeMap<(usize, usize), Color>) -> PrecoloredCubicGraph {
    let names = (0..8).map(|v| format!("q{v:03b}")).collect();
    let in_a = (0..8u32).map(|v| v.count_ones() % 2 == 0).collect();
    let adj = (0..8).map(|v| [v ^ 1, v ^ 2, v ^ 4]).collect();
    PrecoloredCubicGraph::new(names, in_a, adj, precolor).expect("the cube is cubic and bipartite")
}

pub const UNCOLORED_LIMIT: usize = 16;

/// Extends the precolouring to a proper 3-edge-colouring by exhaustive
/// search, or reports that none exists.
pub fn solve_cbp_epe_brute(g: &PrecoloredCubicGraph) -> Result<Option<Vec<Color>>, ReductionError> {
    let edges = g.edges();
    let free: Vec<usize> = (0..edges.len())
        .filter(|&k| g.precolor(edges[k].0, edges[k].1).is_none())
        .collect();
    if free.len() > UNCOLORED_LIMIT {
        return Err(ReductionError::TooLarge {
            what: "uncoloured edge count",
            size: free.len(),
            limit: UNCOLORED_LIMIT,
        });
    }
    let n = g.vertex_count();
    let mut used = vec![[false; 3]; n];
    let mut coloring: Vec<Option<Color>> = edges.iter().map(|&(a, b)| g.precolor(a, b)).collect();
    for (&(a, b), c) in edges.iter().zip(&coloring) {
        if let Some(c) = c {
            for v in [a, b] {
                if core::mem::replace(&mut used[v][c.index() as usize], true) {
                    return Ok(None);
                }
            }
        }
    }
    fn dfs(
        k: usize,
        free: &[usize],
        edges: &[(usize, usize)],
        used: &mut [[bool; 3]],
        coloring: &mut [Option<Color>],
    ) -> bool {
        let Some(&e) = free.get(k) else { return true };
        let (a, b) = edges[e];
        for c in Color::ALL {
            let i = c.index() as usize;
            if used[a][i] || used[b][i] {
                continue;
            }
            used[a][i] = true;
            used[b][i] = true;
            coloring[e] = Some(c);
            if dfs(k + 1, free, edges, used, coloring) {
                return true;
            }
            used[a][i] = false;
            used[b][i] = false;
        }
        coloring[e] = None;
        false
    }
    if dfs(0, &free, &edges, &mut used, &mut coloring) {
        Ok(Some(coloring.into_iter().map(|c| c.expect("all coloured")).collect()))
    } else {
        Ok(None)
    }
}

/// Initial labels of the non-bold edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanarVariant {
    /// Every edge, bold or not, starts at 1; the output is plain DB.
    Constant,
    /// Bold edges start at their intended times, A-side spokes at 2 and
    /// B-side spokes at 9, with δ = 10.
    DeltaTen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// A bold edge or one of its chain edges, with its intended time.
    Bold(Time),
    /// Step `0..3` along spoke `i` of gadget `v`; `initial` is its
    /// starting label under [`PlanarVariant::DeltaTen`].
    Spoke { v: usize, i: usize, step: Time, initial: Time },
}

struct Planner {
    em: Emitter,
    variant: PlanarVariant,
    ids: BTreeMap<String, VertexId>,
    names: Vec<String>,
    kinds: Vec<Kind>,
}

impl Planner {
    fn vertex(&mut self, name: String, role: &'static str, source: Source) -> VertexId {
        if let Some(&id) = self.ids.get(&name) {
            return id;
        }
        let id = self.em.vertex(name.clone(), role, source);
        self.ids.insert(name.clone(), id);
        self.names.push(name);
        id
    }

    fn edge(&mut self, a: VertexId, b: VertexId, kind: Kind, role: &'static str, source: Source) {
        let initial = match (self.variant, kind) {
            (PlanarVariant::Constant, _) => 1,
            (PlanarVariant::DeltaTen, Kind::Bold(t)) => t,
            (PlanarVariant::DeltaTen, Kind::Spoke { initial, .. }) => initial,
        };
        self.em.edge(a, b, initial, role, source);
        self.kinds.push(kind);
    }

    /// A bold edge `x → y` at time `t`: a chain of `t − 1` fresh vertices
    /// ending in `x` at times `1..t−1`, and the demand `(xy_1, y, t)`.
    fn bold(&mut self, x: VertexId, y: VertexId, t: Time, source: Source) {
        let stem = format!("{}>{}", self.names[x], self.names[y]);
        let mut chain: Vec<VertexId> = (1..t)
            .map(|k| self.vertex(format!("{stem}.{k}"), "bold-chain", source))
            .collect();
        chain.push(x);
        for (k, w) in chain.windows(2).enumerate() {
            self.edge(w[0], w[1], Kind::Bold(k as Time + 1), "bold-chain", source);
        }
        self.edge(x, y, Kind::Bold(t), "bold", source);
        self.em.demand(chain[0], y, t, "bold", source);
    }
}

fn layer(g: &PrecoloredCubicGraph, v: usize, c: char, i: usize) -> String {
    format!("{}.{c}{}", g.name(v), i + 1)
}

fn feeder(g: &PrecoloredCubicGraph, v: usize, c: char) -> String {
    format!("{}.s{c}", g.name(v))
}

fn build(g: &PrecoloredCubicGraph, variant: PlanarVariant, directed: bool) -> (Emitter, Vec<Kind>) {
    let mut p = Planner {
        em: Emitter::new(directed),
        variant,
        ids: BTreeMap::new(),
        names: Vec::new(),
        kinds: Vec::new(),
    };
    let centers: Vec<VertexId> = (0..g.vertex_count())
        .map(|v| p.vertex(String::from(g.name(v)), "vertex", Source::Vertex(v)))
        .collect();
    for v in 0..g.vertex_count() {
        let src = Source::Vertex(v);
        let names: Vec<[String; 3]> = ['B', 'R', 'G']
            .iter()
            .map(|&c| [layer(g, v, c, 0), layer(g, v, c, 1), layer(g, v, c, 2)])
            .collect();
        let lay: Vec<[VertexId; 3]> = names
            .iter()
            .map(|ns| ns.clone().map(|n| p.vertex(n, "layer", src)))
            .collect();
        let feeders: Vec<VertexId> = ['B', 'R', 'G']
            .iter()
            .map(|&c| p.vertex(feeder(g, v, c), "hermit", src))
            .collect();
        if g.in_a(v) {
            for i in 0..3 {
                let path = [centers[v], lay[0][i], lay[1][i], lay[2][i]];
                for (step, w) in path.windows(2).enumerate() {
                    let kind = Kind::Spoke { v, i, step: step as Time, initial: 2 };
                    p.edge(w[0], w[1], kind, "spoke", src);
                }
            }
            for (k, start) in [(0usize, 1), (1, 4), (2, 7)] {
                p.bold(feeders[k], centers[v], start, src);
                let base = 3 + 4 * k as Time;
                p.bold(lay[k][0], lay[k][1], base, src);
                p.bold(lay[k][1], lay[k][2], base + 1, src);
                p.em.demand(feeders[k], lay[k][2], base + 1, "hermit", src);
            }
        } else {
            for i in 0..3 {
                let path = [lay[0][i], lay[1][i], lay[2][i], centers[v]];
                for (step, w) in path.windows(2).enumerate() {
                    let kind = Kind::Spoke { v, i, step: step as Time, initial: 9 };
                    p.edge(w[0], w[1], kind, "spoke", src);
                }
            }
            for (k, base) in [(0usize, 8), (1, 12), (2, 16)] {
                p.bold(feeders[k], lay[k][0], base, src);
                p.bold(lay[k][0], lay[k][1], base + 1, src);
                p.bold(lay[k][1], lay[k][2], base + 2, src);
                p.em.demand(feeders[k], centers[v], 13 + 3 * k as Time, "hermit", src);
            }
        }
    }
    for (e, (a, b)) in g.edges().into_iter().enumerate() {
        let src = Source::Edge(e);
        let j = g.neighbor_index(a, b);
        let i = g.neighbor_index(b, a);
        let from = p.ids[&layer(g, a, 'G', j)];
        let to = p.ids[&layer(g, b, 'B', i)];
        for c in Color::ALL {
            if g.precolor(a, b).is_some_and(|pc| pc != c) {
                continue;
            }
            let mid = p.vertex(
                format!("{}~{}.{}", g.name(a), g.name(b), c.letter()),
                "edge-gadget",
                src,
            );
            let t = 7 + 3 * c.index();
            p.bold(from, mid, t, src);
            p.bold(mid, to, t + 1, src);
        }
        p.em.demand(centers[a], centers[b], 19, "traveler", src);
    }
    (p.em, p.kinds)
}

/// Builds the construction; `directed` orients every edge as described,
/// otherwise the same edges are left unoriented.
pub fn reduce_cbpepe_to_delta_db(
    g: &PrecoloredCubicGraph,
    variant: PlanarVariant,
    directed: bool,
) -> Result<ReductionOutput, ReductionError> {
    let (em, _) = build(g, variant, directed);
    em.finish(match variant {
        PlanarVariant::Constant => None,
        PlanarVariant::DeltaTen => Some(10),
    })
}

/// The yes-direction delaying for a proper colouring extending the
/// precolouring: bold edges at their intended times, and the spoke towards
/// a neighbour joined by colour `k` at `2+3k, 3+3k, 4+3k` (A side) or
/// `11+3k, 12+3k, 13+3k` (B side).
pub fn planar_forward_solution(
    g: &PrecoloredCubicGraph,
    out: &ReductionOutput,
    coloring: &[Color],
) -> Result<Delaying, ReductionError> {
    g.check_coloring(coloring)?;
    let color: BTreeMap<(usize, usize), Color> = g
        .edges()
        .into_iter()
        .zip(coloring)
        .map(|((a, b), &c)| (key(a, b), c))
        .collect();
    let (_, kinds) = build(g, PlanarVariant::Constant, out.instance.graph().is_directed());
    let labels = kinds
        .iter()
        .map(|k| match *k {
            Kind::Bold(t) => t,
            Kind::Spoke { v, i, step, .. } => {
                let c = color[&key(v, g.neighbors(v)[i])].index();
                let base = if g.in_a(v) { 2 } else { 11 };
                base + 3 * c + step
            }
        })
        .collect();
    Ok(Delaying::new(labels))
}
