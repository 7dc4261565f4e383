use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{invalid, Result};

/// Branch sets indexed by pattern vertex. Each set is kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InducedMinorModel {
    pub branch_sets: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct ModelWire {
    branch_sets: BTreeMap<String, Vec<usize>>,
}

impl InducedMinorModel {
    pub fn new(mut branch_sets: Vec<Vec<usize>>) -> Self {
        for set in branch_sets.iter_mut() {
            set.sort_unstable();
            set.dedup();
        }
        InducedMinorModel { branch_sets }
    }

    pub fn pattern_size(&self) -> usize {
        self.branch_sets.len()
    }

    /// Rewrites host ids through `map` (e.g. subgraph-to-parent ids).
    pub fn relabel_host(&self, map: &[usize]) -> Self {
        InducedMinorModel::new(self.branch_sets.iter().map(|s| s.iter().map(|&v| map[v]).collect()).collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let branch_sets = self.branch_sets.iter().enumerate().map(|(i, s)| (i.to_string(), s.clone())).collect();
        serde_json::to_value(ModelWire { branch_sets }).expect("model serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let wire: ModelWire = serde_json::from_value(value.clone())?;
        let mut sets = vec![None; wire.branch_sets.len()];
        for (key, set) in wire.branch_sets {
            let idx: usize = key.parse().map_err(|_| crate::Error::InvalidInput(format!("bad pattern id {key:?}")))?;
            if idx >= sets.len() || sets[idx].is_some() {
                return invalid(format!("pattern ids must be 0..{}", sets.len()));
            }
            sets[idx] = Some(set);
        }
        Ok(InducedMinorModel::new(sets.into_iter().map(Option::unwrap).collect()))
    }
}

fn owners(g: &Graph, h: &Graph, m: &InducedMinorModel) -> Result<Option<Vec<Option<usize>>>> {
    if m.branch_sets.len() != h.n() {
        return invalid(format!("model has {} branch sets, pattern has {} vertices", m.branch_sets.len(), h.n()));
    }
    let mut owner = vec![None; g.n()];
    let mut disjoint = true;
    for (p, set) in m.branch_sets.iter().enumerate() {
        for &v in set {
            if v >= g.n() {
                return invalid(format!("host vertex {v} out of range"));
            }
            if owner[v].is_some() {
                disjoint = false;
            }
            owner[v] = Some(p);
        }
    }
    let ok = disjoint && m.branch_sets.iter().all(|s| g.is_connected_set(s));
    Ok(ok.then_some(owner))
}

fn adjacent_pairs(g: &Graph, owner: &[Option<usize>]) -> BTreeSet<(usize, usize)> {
    g.edges()
        .iter()
        .filter_map(|&(a, b)| match (owner[a], owner[b]) {
            (Some(p), Some(q)) if p != q => Some((p.min(q), p.max(q))),
            _ => None,
        })
        .collect()
}

/// Checks disjointness, connectivity, and that branch sets touch exactly
/// when the pattern vertices are adjacent.
pub fn verify_induced_minor_model(g: &Graph, h: &Graph, m: &InducedMinorModel) -> Result<bool> {
    let Some(owner) = owners(g, h, m)? else { return Ok(false) };
    let touching = adjacent_pairs(g, &owner);
    Ok(touching.len() == h.m() && h.edges().iter().all(|e| touching.contains(e)))
}

/// Ordinary minor model: like the induced check but extra adjacencies
/// between branch sets are allowed.
pub fn verify_minor_model(g: &Graph, h: &Graph, m: &InducedMinorModel) -> Result<bool> {
    let Some(owner) = owners(g, h, m)? else { return Ok(false) };
    let touching = adjacent_pairs(g, &owner);
    Ok(h.edges().iter().all(|e| touching.contains(e)))
}

/// Maps a model of a larger pattern to a model of a smaller one: the branch
/// set of target vertex `t` is the union of the source branch sets listed in
/// `groups[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackMap {
    pub groups: Vec<Vec<usize>>,
}

impl BackMap {
    pub fn identity(n: usize) -> Self {
        BackMap { groups: (0..n).map(|v| vec![v]).collect() }
    }

    pub fn apply(&self, model: &InducedMinorModel) -> InducedMinorModel {
        InducedMinorModel::new(
            self.groups
                .iter()
                .map(|g| g.iter().flat_map(|&s| model.branch_sets[s].iter().copied()).collect())
                .collect(),
        )
    }

    /// `self` maps B -> A and `inner` maps C -> B; the result maps C -> A.
    pub fn compose(&self, inner: &BackMap) -> BackMap {
        BackMap {
            groups: self
                .groups
                .iter()
                .map(|g| {
                    let mut out: Vec<usize> = g.iter().flat_map(|&b| inner.groups[b].iter().copied()).collect();
                    out.sort_unstable();
                    out
                })
                .collect(),
        }
    }
}
