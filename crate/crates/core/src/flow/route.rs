use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use super::{cmp_sparsity, ConcurrentFlow, Separation};
use crate::error::{invalid, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq)]
pub struct FlowConfig {
    /// Accepted slack: a flow is returned when its congestion is at most `gamma * (1 + eps)`.
    pub eps: f64,
    /// Rounds are `ceil(rounds_factor * log2(n) / eps^2)`.
    pub rounds_factor: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig { eps: 0.25, rounds_factor: 1.0 }
    }
}

impl FlowConfig {
    pub fn rounds(&self, n: usize) -> usize {
        let log = (n.max(2) as f64).log2();
        (self.rounds_factor * log / (self.eps * self.eps)).ceil().max(1.0) as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FlowOrCut {
    Flow(ConcurrentFlow),
    Cut(Separation),
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    // min-heap on (distance, id)
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra with vertex weights; the source's own weight is included.
fn vertex_dijkstra(g: &Graph, weight: &[f64], s: usize) -> (Vec<f64>, Vec<usize>) {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[s] = weight[s];
    parent[s] = s;
    let mut heap = BinaryHeap::from([Entry(dist[s], s)]);
    while let Some(Entry(d, v)) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for &w in g.neighbors(v) {
            let nd = d + weight[w];
            if !done[w] && nd < dist[w] {
                dist[w] = nd;
                parent[w] = v;
                heap.push(Entry(nd, w));
            }
        }
    }
    (dist, parent)
}

/// Subtree sizes of a parent tree rooted at `s`: the number of `s`-rooted
/// paths through each vertex.
fn tree_loads(parent: &[usize], s: usize) -> Vec<usize> {
    let n = parent.len();
    let mut children = vec![Vec::new(); n];
    for v in (0..n).filter(|&v| v != s) {
        children[parent[v]].push(v);
    }
    let mut order = vec![s];
    let mut i = 0;
    while i < order.len() {
        order.extend_from_slice(&children[order[i]]);
        i += 1;
    }
    let mut load = vec![1usize; n];
    for &v in order.iter().rev().filter(|&&v| v != s) {
        load[parent[v]] += load[v];
    }
    load
}

/// Multiplicative-weights routing of all ordered pairs under vertex
/// capacities `gamma`. Returns a flow when the averaged routing has
/// congestion at most `gamma * (1 + eps)`, and otherwise the sparsest
/// ball-growing separation under the final lengths.
///
/// Routing is skipped when `gamma * (1 + eps) < 2n - 1`, since every vertex
/// lies on at least `2n - 1` paths of any concurrent flow.
pub fn flow_or_sparse_cut(g: &Graph, gamma: f64, cfg: &FlowConfig) -> Result<FlowOrCut> {
    let n = g.n();
    if n == 0 || !g.is_connected() {
        return invalid("flow_or_sparse_cut needs a nonempty connected graph");
    }
    if !(gamma >= 1.0) {
        return invalid(format!("gamma = {gamma} is below 1, no concurrent flow can exist"));
    }
    if n == 1 {
        return Ok(FlowOrCut::Flow(ConcurrentFlow::from_paths(g, vec![(vec![0], 1.0)])?));
    }
    let budget = gamma * (1.0 + cfg.eps);
    let mut loglen = vec![-gamma.ln(); n];
    if budget >= (2 * n - 1) as f64 {
        let rounds = cfg.rounds(n);
        let mut trees: Vec<Vec<usize>> = Vec::with_capacity(rounds * n);
        let mut total = vec![0.0f64; n];
        for _ in 0..rounds {
            for s in 0..n {
                let top = loglen.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let weight: Vec<f64> = loglen.iter().map(|l| (l - top).exp()).collect();
                let (_, parent) = vertex_dijkstra(g, &weight, s);
                let load = tree_loads(&parent, s);
                for v in 0..n {
                    total[v] += load[v] as f64;
                    loglen[v] += cfg.eps * load[v] as f64 / gamma;
                }
                trees.push(parent);
            }
        }
        let congestion = total.iter().cloned().fold(0.0, f64::max) / rounds as f64;
        if congestion <= budget {
            let flow = materialize(g, &trees, rounds)?;
            if flow.congestion() <= budget {
                return Ok(FlowOrCut::Flow(flow));
            }
        }
    }
    Ok(FlowOrCut::Cut(sweep_cut(g, &loglen)))
}

/// Averages the stored shortest-path trees into a flow. If that would
/// exceed `n^3` paths, each pair keeps its `n` heaviest paths, rescaled.
fn materialize(g: &Graph, trees: &[Vec<usize>], rounds: usize) -> Result<ConcurrentFlow> {
    let n = g.n();
    let mut per_pair: Vec<HashMap<Vec<usize>, f64>> = vec![HashMap::new(); n * n];
    let w = 1.0 / rounds as f64;
    for (i, parent) in trees.iter().enumerate() {
        let s = i % n;
        for t in 0..n {
            let mut p = vec![t];
            let mut v = t;
            while v != s {
                v = parent[v];
                p.push(v);
            }
            p.reverse();
            *per_pair[s * n + t].entry(p).or_insert(0.0) += w;
        }
    }
    let count: usize = per_pair.iter().map(HashMap::len).sum();
    let mut paths = Vec::with_capacity(count);
    for map in per_pair {
        let mut list: Vec<(Vec<usize>, f64)> = map.into_iter().collect();
        list.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        if count > n * n * n {
            list.truncate(n);
            let sum: f64 = list.iter().map(|x| x.1).sum();
            for x in list.iter_mut() {
                x.1 /= sum;
            }
        }
        paths.extend(list);
    }
    ConcurrentFlow::from_paths(g, paths)
}

/// Ball-growing sweep from every source: vertices ordered by (distance,
/// id), each proper prefix `P` gives `A = P`, `S = N(P) \ P`. The sparsest
/// wins; ties go to the smaller prefix, then the smaller source.
fn sweep_cut(g: &Graph, loglen: &[f64]) -> Separation {
    let n = g.n();
    let top = loglen.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weight: Vec<f64> = loglen.iter().map(|l| (l - top).exp()).collect();
    let mut best: Option<((u128, u128), usize, usize, Vec<usize>)> = None;
    for s in 0..n {
        let (dist, _) = vertex_dijkstra(g, &weight, s);
        let hops = g.bfs_distances(s);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(hops[a].cmp(&hops[b])).then(a.cmp(&b)));
        let mut in_a = vec![false; n];
        let mut touched = vec![false; n];
        let mut s_size = 0usize;
        for (k, &v) in order.iter().enumerate().take(n - 1) {
            in_a[v] = true;
            if touched[v] {
                s_size -= 1;
            }
            for &w in g.neighbors(v) {
                if !in_a[w] && !touched[w] {
                    touched[w] = true;
                    s_size += 1;
                }
            }
            let a_size = k + 1;
            let frac = (s_size as u128, (a_size + s_size) as u128 * (n - a_size) as u128);
            let better = match &best {
                None => true,
                Some((bf, bk, _, _)) => match cmp_sparsity(frac, *bf) {
                    Ordering::Less => true,
                    Ordering::Equal => a_size < *bk,
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((frac, a_size, s, order[..a_size].to_vec()));
            }
        }
    }
    let (_, _, _, a) = best.expect("n >= 2 gives a prefix");
    let mut side = vec![0u8; n];
    for &v in &a {
        side[v] = 1;
    }
    let mut s = Vec::new();
    for &v in &a {
        for &w in g.neighbors(v) {
            if side[w] == 0 {
                side[w] = 2;
                s.push(w);
            }
        }
    }
    let b = (0..n).filter(|&v| side[v] == 0).collect();
    Separation::new(a, s, b)
}
