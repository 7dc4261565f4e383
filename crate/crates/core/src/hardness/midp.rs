use serde::{Deserialize, Serialize};

use super::csp::BinaryCsp;
use crate::binshift::{bs_generate, ShiftPartition};
use crate::error::{invalid, Result};
use crate::graph::{verify_tree_decomposition, Graph, TreeDecomposition};

/// Multicolored induced disjoint paths: `part[v]` is the part of `v`, and
/// part `i` must be crossed from `terminals[i].0` to `terminals[i].1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MidpInstance {
    pub graph: Graph,
    pub part: Vec<usize>,
    pub terminals: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct MidpWire {
    graph: serde_json::Value,
    part: Vec<usize>,
    terminals: Vec<[usize; 2]>,
}

impl MidpInstance {
    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k()];
        for (v, &p) in self.part.iter().enumerate() {
            out[p].push(v);
        }
        out
    }

    /// No edges between parts more than one apart, distinct terminals
    /// inside their own parts.
    pub fn structure_ok(&self) -> bool {
        self.part.len() == self.graph.n()
            && self.part.iter().all(|&p| p < self.k())
            && self.graph.edges().iter().all(|&(u, v)| self.part[u].abs_diff(self.part[v]) <= 1)
            && self.terminals.iter().enumerate().all(|(i, &(s, t))| {
                s != t && s < self.graph.n() && t < self.graph.n() && self.part[s] == i && self.part[t] == i
            })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let wire = MidpWire {
            graph: self.graph.to_json(),
            part: self.part.clone(),
            terminals: self.terminals.iter().map(|&(s, t)| [s, t]).collect(),
        };
        serde_json::to_value(wire).expect("instance serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let wire: MidpWire = serde_json::from_value(value.clone())?;
        let graph = Graph::from_json(&wire.graph)?;
        if wire.part.len() != graph.n() {
            return invalid("part list does not match the graph");
        }
        Ok(MidpInstance { graph, part: wire.part, terminals: wire.terminals.iter().map(|&[s, t]| (s, t)).collect() })
    }
}

/// True iff path `i` runs `s_i` to `t_i` inside part `i` and distinct paths
/// share no vertex and no edge.
pub fn verify_midp_solution(inst: &MidpInstance, paths: &[Vec<usize>]) -> bool {
    let g = &inst.graph;
    if paths.len() != inst.k() {
        return false;
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (i, p) in paths.iter().enumerate() {
        let (s, t) = inst.terminals[i];
        if p.first() != Some(&s) || p.last() != Some(&t) {
            return false;
        }
        for (j, &v) in p.iter().enumerate() {
            if v >= g.n() || inst.part[v] != i || owner[v] != usize::MAX {
                return false;
            }
            owner[v] = i;
            if j > 0 && !g.has_edge(p[j - 1], v) {
                return false;
            }
        }
    }
    g.edges().iter().all(|&(u, v)| owner[u] == usize::MAX || owner[v] == usize::MAX || owner[u] == owner[v])
}

/// Paths from the reduction of a CSP on `n` variables: layer layout and
/// pathwidth certificates for consecutive layer pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct MidpReduction {
    pub instance: MidpInstance,
    pub vars: usize,
    /// `certificates[l]` decomposes the layers `l` and `l + 1` in the ids of
    /// [`MidpReduction::layer_pair`].
    pub certificates: Vec<TreeDecomposition>,
}

pub const MIDP_LAYERS: usize = 5;

/// Vertex ids inside one layer of `n` variable columns.
pub struct Layout {
    pub n: usize,
}

impl Layout {
    pub fn size(&self) -> usize {
        4 * self.n + 1
    }
    /// Letter `p` (0, 1, 2 for a, b, c) of column `j`.
    pub fn letter(&self, layer: usize, j: usize, p: usize) -> usize {
        layer * self.size() + 3 * j + p
    }
    /// Connector between columns `j` and `j + 1`.
    pub fn connector(&self, layer: usize, j: usize) -> usize {
        layer * self.size() + 3 * self.n + j
    }
    pub fn s(&self, layer: usize) -> usize {
        layer * self.size() + 4 * self.n - 1
    }
    pub fn t(&self, layer: usize) -> usize {
        layer * self.size() + 4 * self.n
    }
}

impl MidpReduction {
    pub fn layout(&self) -> Layout {
        Layout { n: self.vars }
    }

    /// `G[V_l ∪ V_{l+1}]`; local id = global id minus the start of layer `l`.
    pub fn layer_pair(&self, l: usize) -> Graph {
        let size = self.layout().size();
        let verts: Vec<usize> = (l * size..(l + 2) * size).collect();
        self.instance.graph.induced_subgraph(&verts).0
    }

    /// `(verifies, width)` for each consecutive layer pair.
    pub fn certificate_verdicts(&self) -> Result<Vec<(bool, usize)>> {
        self.certificates
            .iter()
            .enumerate()
            .map(|(l, td)| Ok((verify_tree_decomposition(&self.layer_pair(l), td)?, td.width())))
            .collect()
    }

    /// Paths choosing letter `assignment[j]` in every column of every layer.
    pub fn paths_for(&self, assignment: &[u8]) -> Vec<Vec<usize>> {
        let lay = self.layout();
        (0..MIDP_LAYERS)
            .map(|l| {
                let mut p = vec![lay.s(l)];
                for j in 0..lay.n {
                    p.push(lay.letter(l, j, assignment[j] as usize));
                    if j + 1 < lay.n {
                        p.push(lay.connector(l, j));
                    }
                }
                p.push(lay.t(l));
                p
            })
            .collect()
    }
}

/// Five layers, each a ladder whose `s`-`t` paths pick one letter per
/// variable. Consecutive layers are joined by copy gadgets (different
/// letters of the same column adjacent) and by one edge per forbidden value
/// pair of each constraint whose edge lies in the matching partition part.
pub fn csp_to_midp(csp: &BinaryCsp, partition: &ShiftPartition) -> Result<MidpReduction> {
    if partition.b < 2 || csp.graph != bs_generate(partition.b)? {
        return invalid("constraint graph is not the binary shift graph of the partition");
    }
    let n = csp.graph.n();
    let lay = Layout { n };
    let mut edges = Vec::new();
    for l in 0..MIDP_LAYERS {
        for j in 0..n {
            for p in 0..3 {
                let x = lay.letter(l, j, p);
                if j > 0 {
                    edges.push((x, lay.connector(l, j - 1)));
                }
                if j + 1 < n {
                    edges.push((x, lay.connector(l, j)));
                }
                if j == 0 {
                    edges.push((x, lay.s(l)));
                }
                if j + 1 == n {
                    edges.push((x, lay.t(l)));
                }
            }
        }
    }
    for l in 0..MIDP_LAYERS - 1 {
        for j in 0..n {
            for p in 0..3 {
                for q in (0..3).filter(|&q| q != p) {
                    edges.push((lay.letter(l, j, p), lay.letter(l + 1, j, q)));
                }
            }
        }
        for &(x, y) in &partition.parts[l] {
            let r = &csp.relations[csp.graph.edge_index(x, y).expect("partition edge")];
            for p in 0..3 {
                for q in 0..3 {
                    if !r[p][q] {
                        edges.push((lay.letter(l, x, p), lay.letter(l + 1, y, q)));
                    }
                }
            }
        }
    }
    let total = MIDP_LAYERS * lay.size();
    let graph = Graph::from_edges(total, edges)?;
    let part = (0..total).map(|v| v / lay.size()).collect();
    let terminals = (0..MIDP_LAYERS).map(|l| (lay.s(l), lay.t(l))).collect();

    // bag substitution: v_j becomes its letters in both layers, the
    // connectors on either side, and s or t at the ends
    let certificates = (0..MIDP_LAYERS - 1)
        .map(|l| {
            let base = l * lay.size();
            let bags = partition.certificates[l]
                .bags
                .iter()
                .map(|bag| {
                    let mut out = Vec::new();
                    for &j in bag {
                        for layer in [l, l + 1] {
                            out.extend((0..3).map(|p| lay.letter(layer, j, p) - base));
                            if j + 1 < n {
                                out.push(lay.connector(layer, j) - base);
                            }
                            if j > 0 {
                                out.push(lay.connector(layer, j - 1) - base);
                            }
                            if j == 0 {
                                out.push(lay.s(layer) - base);
                            }
                            if j + 1 == n {
                                out.push(lay.t(layer) - base);
                            }
                        }
                    }
                    out
                })
                .collect();
            TreeDecomposition::path(bags)
        })
        .collect();
    Ok(MidpReduction { instance: MidpInstance { graph, part, terminals }, vars: n, certificates })
}

/// Exhaustive search for a solution, parts in order, each path grown by
/// depth-first search around the closed neighborhoods of earlier paths.
pub fn solve_midp_brute(inst: &MidpInstance) -> Option<Vec<Vec<usize>>> {
    struct S<'a> {
        inst: &'a MidpInstance,
        blocked: Vec<u32>,
        on_path: Vec<bool>,
        paths: Vec<Vec<usize>>,
    }
    impl S<'_> {
        fn part(&mut self, i: usize) -> bool {
            if i == self.inst.k() {
                return true;
            }
            let s = self.inst.terminals[i].0;
            if self.blocked[s] > 0 {
                return false;
            }
            self.paths.push(vec![s]);
            self.on_path[s] = true;
            let ok = self.extend(i);
            self.on_path[s] = false;
            if !ok {
                self.paths.pop();
            }
            ok
        }

        fn extend(&mut self, i: usize) -> bool {
            let g = &self.inst.graph;
            let last = *self.paths[i].last().unwrap();
            if last == self.inst.terminals[i].1 {
                let path = self.paths[i].clone();
                self.mark(&path, 1);
                let ok = self.part(i + 1);
                self.mark(&path, -1);
                return ok;
            }
            for &w in g.neighbors(last) {
                if self.inst.part[w] != i || self.on_path[w] || self.blocked[w] > 0 {
                    continue;
                }
                self.on_path[w] = true;
                self.paths[i].push(w);
                if self.extend(i) {
                    self.on_path[w] = false;
                    return true;
                }
                self.paths[i].pop();
                self.on_path[w] = false;
            }
            false
        }

        fn mark(&mut self, path: &[usize], d: i32) {
            let g = &self.inst.graph;
            for &v in path {
                for &x in std::iter::once(&v).chain(g.neighbors(v)) {
                    self.blocked[x] = (self.blocked[x] as i32 + d) as u32;
                }
            }
        }
    }
    let n = inst.graph.n();
    let mut s = S { inst, blocked: vec![0; n], on_path: vec![false; n], paths: Vec::new() };
    s.part(0).then_some(s.paths)
}
