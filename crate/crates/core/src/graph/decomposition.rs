use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{invalid, Result};

/// Tree decomposition; a path decomposition is the case where `tree` is a path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    #[serde(serialize_with = "ser_graph", deserialize_with = "de_graph")]
    pub tree: Graph,
    pub bags: Vec<Vec<usize>>,
}

fn ser_graph<S: serde::Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    g.to_json().serialize(s)
}

fn de_graph<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Graph, D::Error> {
    let v = serde_json::Value::deserialize(d)?;
    Graph::from_json(&v).map_err(serde::de::Error::custom)
}

impl TreeDecomposition {
    pub fn single_bag(g: &Graph) -> Self {
        TreeDecomposition { tree: Graph::empty(1), bags: vec![(0..g.n()).collect()] }
    }

    /// Path decomposition with bags in the given order.
    pub fn path(bags: Vec<Vec<usize>>) -> Self {
        let k = bags.len();
        let tree = Graph::from_normalized(k, (1..k).map(|i| (i - 1, i)).collect());
        TreeDecomposition { tree, bags: bags.into_iter().map(normalize).collect() }
    }

    /// Maximum bag size minus one (zero for all-empty bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }
}

fn normalize(mut bag: Vec<usize>) -> Vec<usize> {
    bag.sort_unstable();
    bag.dedup();
    bag
}

/// Checks edge coverage and that each vertex occupies a nonempty connected
/// subtree. A tree that is empty, cyclic or disconnected is an input error.
pub fn verify_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<bool> {
    let t = &td.tree;
    if t.n() == 0 || t.n() != td.bags.len() {
        return invalid("tree must have one node per bag and at least one node");
    }
    if t.m() + 1 != t.n() || !t.is_connected() {
        return invalid("decomposition tree is not a tree");
    }
    let mut occupied: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    let mut bag_sets = Vec::with_capacity(td.bags.len());
    for (node, bag) in td.bags.iter().enumerate() {
        let set: BTreeSet<usize> = bag.iter().copied().collect();
        for &v in &set {
            if v >= g.n() {
                return invalid(format!("bag vertex {v} out of range"));
            }
            occupied[v].push(node);
        }
        bag_sets.push(set);
    }
    for &(u, v) in g.edges() {
        // scan the shorter occupancy list
        let (a, b) = if occupied[u].len() <= occupied[v].len() { (u, v) } else { (v, u) };
        if !occupied[a].iter().any(|&node| bag_sets[node].contains(&b)) {
            return Ok(false);
        }
    }
    Ok(occupied.iter().all(|nodes| t.is_connected_set(nodes)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyOrdering {
    /// Vertices listed by rank (rank 1 first).
    pub order: Vec<usize>,
    /// `rank[v]` in `1..=n`.
    pub rank: Vec<usize>,
    pub degeneracy: usize,
}

/// Exact degeneracy via repeated removal of a minimum-degree vertex
/// (smallest id on ties). Removed vertices get the highest remaining rank,
/// so every vertex has at most `degeneracy` neighbors of smaller rank.
pub fn degeneracy_ordering(g: &Graph) -> DegeneracyOrdering {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut rank = vec![0; n];
    let mut degeneracy = 0;
    for step in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (deg[v], v)).expect("vertex left");
        degeneracy = degeneracy.max(deg[v]);
        removed[v] = true;
        rank[v] = n - step;
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    let mut order = vec![0; n];
    for v in 0..n {
        order[rank[v] - 1] = v;
    }
    DegeneracyOrdering { order, rank, degeneracy }
}
