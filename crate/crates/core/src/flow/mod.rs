//! Concurrent flows with vertex congestion, separations, and the
//! flow-or-sparse-cut routine with its balanced-separator driver.

mod route;
mod peel;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::Graph;

pub use peel::{balanced_separator_or_flow, PeelOutcome, PeelReport};
pub use route::{flow_or_sparse_cut, FlowConfig, FlowOrCut};

/// Tolerance on every per-pair demand sum.
pub const DEMAND_TOL: f64 = 1e-9;

/// Weighted paths carrying one unit of flow for every ordered vertex pair,
/// including the trivial path `[v]` for `(v, v)`.
///
/// Paths are stored flat, grouped by ordered pair `(first, last)` and sorted
/// lexicographically within each pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcurrentFlow {
    n: usize,
    verts: Vec<usize>,
    path_start: Vec<usize>,
    weights: Vec<f64>,
    pair_start: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PathWire {
    vertices: Vec<usize>,
    weight: f64,
}

#[derive(Serialize, Deserialize)]
struct FlowWire {
    paths: Vec<PathWire>,
}

impl ConcurrentFlow {
    /// Validates and indexes a path collection. Identical paths are merged.
    pub fn from_paths(g: &Graph, mut paths: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        let n = g.n();
        let mut mark = vec![usize::MAX; n];
        for (idx, (p, w)) in paths.iter().enumerate() {
            if p.is_empty() {
                return invalid("empty path in flow");
            }
            if !w.is_finite() || *w < 0.0 {
                return invalid(format!("path weight {w} is not a nonnegative real"));
            }
            for (i, &v) in p.iter().enumerate() {
                if v >= n {
                    return invalid(format!("path vertex {v} out of range"));
                }
                if mark[v] == idx {
                    return invalid(format!("path {p:?} repeats vertex {v}"));
                }
                mark[v] = idx;
                if i > 0 && !g.has_edge(p[i - 1], v) {
                    return invalid(format!("path {p:?} uses non-edge ({},{v})", p[i - 1]));
                }
            }
        }
        paths.sort_by(|(p, _), (q, _)| pair_key(p, n).cmp(&pair_key(q, n)).then_with(|| p.cmp(q)));
        paths.dedup_by(|later, kept| {
            if later.0 == kept.0 {
                kept.1 += later.1;
                true
            } else {
                false
            }
        });
        let limit = n.saturating_mul(n).saturating_mul(n).max(1);
        if paths.len() > limit {
            return invalid(format!("{} paths exceed the n^3 = {limit} limit", paths.len()));
        }

        let mut flow = ConcurrentFlow {
            n,
            verts: Vec::new(),
            path_start: vec![0],
            weights: Vec::with_capacity(paths.len()),
            pair_start: vec![0; n * n + 1],
        };
        for (p, w) in &paths {
            flow.pair_start[pair_key(p, n) + 1] += 1;
            flow.verts.extend_from_slice(p);
            flow.path_start.push(flow.verts.len());
            flow.weights.push(*w);
        }
        for i in 0..n * n {
            flow.pair_start[i + 1] += flow.pair_start[i];
        }
        for a in 0..n {
            for b in 0..n {
                let total: f64 = flow.pair_paths(a, b).map(|(_, w)| w).sum();
                if (total - 1.0).abs() > DEMAND_TOL {
                    return invalid(format!("pair ({a},{b}) carries {total}, expected 1"));
                }
            }
        }
        Ok(flow)
    }

    /// One breadth-first shortest path per ordered pair, smallest-id ties.
    pub fn shortest_paths(g: &Graph) -> Result<Self> {
        if !g.is_connected() {
            return invalid("shortest-path flow needs a connected graph");
        }
        let mut paths = Vec::with_capacity(g.n() * g.n());
        for s in 0..g.n() {
            let parent = bfs_tree(g, s);
            for t in 0..g.n() {
                let mut p = vec![t];
                let mut v = t;
                while v != s {
                    v = parent[v];
                    p.push(v);
                }
                p.reverse();
                paths.push((p, 1.0));
            }
        }
        Self::from_paths(g, paths)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn path_count(&self) -> usize {
        self.weights.len()
    }

    pub fn path(&self, i: usize) -> (&[usize], f64) {
        (&self.verts[self.path_start[i]..self.path_start[i + 1]], self.weights[i])
    }

    pub fn paths(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        (0..self.path_count()).map(move |i| self.path(i))
    }

    /// The `a`-`b` paths in lexicographic order.
    pub fn pair_paths(&self, a: usize, b: usize) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        let k = a * self.n + b;
        (self.pair_start[k]..self.pair_start[k + 1]).map(move |i| self.path(i))
    }

    /// Total weight of paths through each vertex.
    pub fn vertex_loads(&self) -> Vec<f64> {
        let mut load = vec![0.0; self.n];
        for (p, w) in self.paths() {
            for &v in p {
                load[v] += w;
            }
        }
        load
    }

    pub fn congestion(&self) -> f64 {
        self.vertex_loads().into_iter().fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let paths = self.paths().map(|(p, w)| PathWire { vertices: p.to_vec(), weight: w }).collect();
        serde_json::to_value(FlowWire { paths }).expect("flow serializes")
    }

    pub fn from_json(g: &Graph, value: &serde_json::Value) -> Result<Self> {
        let wire: FlowWire = serde_json::from_value(value.clone())?;
        Self::from_paths(g, wire.paths.into_iter().map(|p| (p.vertices, p.weight)).collect())
    }
}

fn pair_key(p: &[usize], n: usize) -> usize {
    p[0] * n + p[p.len() - 1]
}

pub(crate) fn bfs_tree(g: &Graph, s: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; g.n()];
    parent[s] = s;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    parent
}

/// Vertex separation `(A, S, B)`: disjoint, covering, no `A`-`B` edge.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Separation {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
}

impl Separation {
    pub fn new(mut a: Vec<usize>, mut s: Vec<usize>, mut b: Vec<usize>) -> Self {
        a.sort_unstable();
        s.sort_unstable();
        b.sort_unstable();
        Separation { a, s, b }
    }

    /// Sparsity `|S| / (|A ∪ S| * |B ∪ S|)` as an exact fraction.
    pub fn sparsity_fraction(&self) -> (u128, u128) {
        let s = self.s.len() as u128;
        (s, (self.a.len() as u128 + s) * (self.b.len() as u128 + s))
    }

    pub fn sparsity(&self) -> f64 {
        let (num, den) = self.sparsity_fraction();
        if den == 0 {
            return f64::INFINITY;
        }
        num as f64 / den as f64
    }

    /// `max(|A|, |B|) <= 2n/3`, compared in integers.
    pub fn is_balanced(&self, n: usize) -> bool {
        3 * self.a.len().max(self.b.len()) <= 2 * n
    }

    /// Disjoint cover of `V(g)` with no edge between `A` and `B`.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let mut side = vec![0u8; g.n()];
        for (tag, set) in [(1u8, &self.a), (2, &self.s), (3, &self.b)] {
            for &v in set {
                if v >= g.n() || side[v] != 0 {
                    return false;
                }
                side[v] = tag;
            }
        }
        side.iter().all(|&t| t != 0) && g.edges().iter().all(|&(u, v)| side[u] + side[v] != 4 || side[u] == 2)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("separation serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let s: Separation = serde_json::from_value(value.clone())?;
        Ok(Separation::new(s.a, s.s, s.b))
    }
}

/// Orders two separations by sparsity using exact cross-multiplication.
pub(crate) fn cmp_sparsity(x: (u128, u128), y: (u128, u128)) -> Ordering {
    (x.0 * y.1).cmp(&(y.0 * x.1))
}
