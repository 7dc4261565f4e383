//! Simple undirected graphs on dense vertex ids `0..n`, plus the pattern
//! transformations and certificate checkers built on top of them.

mod decomposition;
mod model;
mod transform;

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use decomposition::{degeneracy_ordering, verify_tree_decomposition, DegeneracyOrdering, TreeDecomposition};
pub use model::{verify_induced_minor_model, verify_minor_model, BackMap, InducedMinorModel};
pub use transform::{complete_binary_tree, make_subcubic, subdivide, Subcubic, Subdivision};

/// Simple undirected graph. Neighbor lists are kept sorted so every
/// traversal visits vertices in ascending id order.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    version: u32,
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edges: Vec::new() }
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) collapse; loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u},{v}) out of range for n={n}"));
            }
            if u == v {
                return invalid(format!("self-loop at {u}"));
            }
            list.push((u.min(v), u.max(v)));
        }
        Ok(Self::from_normalized(n, list))
    }

    /// `edges` must already be loop-free with endpoints in range.
    pub(crate) fn from_normalized(n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Graph { adj, edges }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of edge `uv` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Subgraph induced by `vertices`, relabelled `0..k` in ascending order
    /// of the original ids. Returns the graph and the new-to-old id map.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        (Graph::from_normalized(keep.len(), edges), keep)
    }

    /// Connected components of the subgraph induced by vertices with
    /// `alive[v]`, each sorted, ordered by smallest member.
    pub fn components_within(&self, alive: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut comps = Vec::new();
        for s in 0..self.n() {
            if !alive[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if alive[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_within(&vec![true; self.n()])
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Whether `set` (nonempty) induces a connected subgraph.
    pub fn is_connected_set(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return false;
        }
        let mut alive = vec![false; self.n()];
        for &v in set {
            alive[v] = true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![set[0]];
        seen[set[0]] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if alive[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        let distinct = alive.iter().filter(|&&a| a).count();
        count == distinct
    }

    /// Shortest `src`-`dst` path (BFS, smallest-id tie-breaking) using only
    /// vertices with `allowed[v]`; `None` if unreachable.
    pub fn bfs_path(&self, src: usize, dst: usize, allowed: Option<&[bool]>) -> Option<Vec<usize>> {
        let ok = |v: usize| allowed.map_or(true, |a| a[v]);
        if !ok(src) || !ok(dst) {
            return None;
        }
        let mut parent = vec![usize::MAX; self.n()];
        parent[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            if v == dst {
                break;
            }
            for &w in &self.adj[v] {
                if ok(w) && parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if parent[dst] == usize::MAX {
            return None;
        }
        let mut path = vec![dst];
        let mut v = dst;
        while v != src {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        Some(path)
    }

    /// Hop distances from `src`; unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Contracts edge `uv`. The merged vertex keeps the smaller id and every
    /// id above the larger endpoint shifts down by one.
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return invalid(format!("edge ({u},{v}) not in graph"));
        }
        let (keep, gone) = (u.min(v), u.max(v));
        let relabel = |x: usize| {
            if x == gone {
                keep
            } else if x > gone {
                x - 1
            } else {
                x
            }
        };
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (relabel(a), relabel(b)))
            .filter(|&(a, b)| a != b)
            .collect();
        Ok(Graph::from_normalized(self.n() - 1, edges))
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)))
            .collect();
        Graph::from_normalized(off + other.n(), edges)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphWire {
            version: 1,
            n: self.n(),
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        })
        .expect("graph serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Graph> {
        let wire: GraphWire = serde_json::from_value(value.clone())?;
        if wire.version != 1 {
            return invalid(format!("unsupported graph version {}", wire.version));
        }
        Graph::from_edges(wire.n, wire.edges.into_iter().map(|[u, v]| (u, v)))
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for v in 0..self.n() {
            let _ = writeln!(out, "  {v};");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// Small constructors used throughout tests, examples and the CLI.
pub mod generators {
    use rand::Rng;

    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_normalized(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Graph::from_normalized(n, edges)
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_normalized(n, edges)
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_normalized(leaves + 1, (1..=leaves).map(|i| (0, i)).collect())
    }

    /// `rows x cols` grid; vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Graph {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Graph::from_normalized(rows * cols, edges)
    }

    /// Erdős–Rényi G(n, p), pairs visited in lexicographic order.
    pub fn random_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_normalized(n, edges)
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_normalized(10, edges)
    }
}
