//! Spanning forests of the footprint with orientation ignored.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{EdgeId, TemporalGraph, VertexId};

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// A rooted forest over a subset of footprint edges that contains no cycle.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    parent: Vec<Option<(VertexId, EdgeId)>>,
    depth: Vec<usize>,
    root: Vec<VertexId>,
}

impl SpanningForest {
    /// Roots each tree at its smallest vertex. `edges` must be acyclic.
    pub fn new(graph: &TemporalGraph, edges: &[EdgeId]) -> Self {
        let n = graph.vertex_count();
        let mut adj: Vec<Vec<(EdgeId, VertexId)>> = vec![Vec::new(); n];
        for &e in edges {
            let edge = graph.edge(e);
            adj[edge.u].push((e, edge.v));
            adj[edge.v].push((e, edge.u));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut root = vec![usize::MAX; n];
        for r in 0..n {
            if root[r] != usize::MAX {
                continue;
            }
            root[r] = r;
            let mut queue = VecDeque::from([r]);
            while let Some(x) = queue.pop_front() {
                for &(e, y) in &adj[x] {
                    if root[y] == usize::MAX {
                        root[y] = r;
                        parent[y] = Some((x, e));
                        depth[y] = depth[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        Self {
            parent,
            depth,
            root,
        }
    }

    pub fn connected(&self, a: VertexId, b: VertexId) -> bool {
        self.root[a] == self.root[b]
    }

    /// The unique forest path from `a` to `b`: its vertices and edges.
    pub fn path(&self, a: VertexId, b: VertexId) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
        if !self.connected(a, b) {
            return None;
        }
        let (mut x, mut y) = (a, b);
        let mut front = vec![a];
        let mut front_edges = Vec::new();
        let mut back = vec![b];
        let mut back_edges = Vec::new();
        while x != y {
            if self.depth[x] >= self.depth[y] {
                let (p, e) = self.parent[x].expect("non-root has a parent");
                front_edges.push(e);
                front.push(p);
                x = p;
            } else {
                let (p, e) = self.parent[y].expect("non-root has a parent");
                back_edges.push(e);
                back.push(p);
                y = p;
            }
        }
        back.pop();
        front.extend(back.into_iter().rev());
        front_edges.extend(back_edges.into_iter().rev());
        Some((front, front_edges))
    }
}

/// Splits the edges into a spanning forest (kept in id order, greedily) and
/// the remaining feedback edges.
pub fn split_forest(graph: &TemporalGraph) -> (Vec<EdgeId>, Vec<EdgeId>) {
    let mut uf = UnionFind::new(graph.vertex_count());
    let mut forest = Vec::new();
    let mut feedback = Vec::new();
    for (e, edge) in graph.edges().iter().enumerate() {
        if uf.union(edge.u, edge.v) {
            forest.push(e);
        } else {
            feedback.push(e);
        }
    }
    (forest, feedback)
}
