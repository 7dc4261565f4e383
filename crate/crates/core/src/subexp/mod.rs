//! Degeneracy branching and the pipelines built on it: maximum independent
//! set and induced-minor testing.

mod branch;
mod treewidth;

use crate::embed::SeparatorConfig;
use crate::error::{invalid, Error, Result};
use crate::graph::{verify_induced_minor_model, Graph, InducedMinorModel};
use crate::oracles::{brute_mis_capped, search_induced_minor, MinorSearch};

pub use branch::{degeneracy_branch, leaf_count_bound, leaf_z_bound, BranchFamily, BranchLeaf};
pub use treewidth::{mis_treewidth_dp, tree_decomposition_via_separators, MAX_DP_BAG};

/// Search cap used by the per-leaf oracle calls.
const LEAF_ORACLE_CAP: usize = 64;

/// Smallest `d` with `d^3 >= n`.
pub fn cube_root_ceil(n: usize) -> usize {
    let mut d = 0;
    while d * d * d < n {
        d += 1;
    }
    d
}

#[derive(Clone, Debug, PartialEq)]
pub struct MisConfig {
    pub separator: SeparatorConfig,
    pub leaf_size: usize,
}

impl Default for MisConfig {
    fn default() -> Self {
        MisConfig { separator: SeparatorConfig::default(), leaf_size: 8 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MisReport {
    pub set: Vec<usize>,
    pub leaves: usize,
    pub max_width: usize,
    /// Leaves solved by the exhaustive fallback.
    pub fallback_leaves: usize,
    /// A model of `h` met during the recursion, in the ids of `g`.
    pub model: Option<InducedMinorModel>,
}

/// Maximum independent set: branch with `delta = 0` and `Delta` the cube
/// root of `n`, then solve each leaf's bounded-degree part through a
/// separator decomposition. A leaf whose decomposition fails falls back to
/// exhaustive search.
pub fn solve_mis(g: &Graph, h: &Graph, cfg: &MisConfig) -> Result<MisReport> {
    let family = degeneracy_branch(g, 0, cube_root_ceil(g.n()))?;
    let mut report = MisReport { set: Vec::new(), leaves: family.leaves.len(), max_width: 0, fallback_leaves: 0, model: None };
    let mut best: Option<Vec<usize>> = None;
    for leaf in &family.leaves {
        let rest: Vec<usize> = leaf.x.iter().copied().filter(|v| leaf.z.binary_search(v).is_err()).collect();
        let (sub, map) = g.induced_subgraph(&rest);
        let local = match tree_decomposition_via_separators(&sub, h, cfg.leaf_size, &cfg.separator) {
            Ok(td) if td.bags.iter().all(|b| b.len() <= MAX_DP_BAG) => {
                report.max_width = report.max_width.max(td.width());
                mis_treewidth_dp(&sub, &td)?
            }
            Ok(_) => {
                report.fallback_leaves += 1;
                brute_mis_capped(&sub, LEAF_ORACLE_CAP)?
            }
            Err(Error::ModelFound(m)) => {
                report.fallback_leaves += 1;
                report.model.get_or_insert_with(|| m.relabel_host(&map));
                brute_mis_capped(&sub, LEAF_ORACLE_CAP)?
            }
            Err(e) => return Err(e),
        };
        let mut set = leaf.z.clone();
        set.extend(local.iter().map(|&v| map[v]));
        if best.as_ref().map_or(true, |b| set.len() > b.len()) {
            best = Some(set);
        }
    }
    let mut set = best.expect("branching yields at least one leaf");
    set.sort_unstable();
    debug_assert!(set.iter().all(|&a| set.iter().all(|&b| !g.has_edge(a, b))));
    report.set = set;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InducedMinorTest {
    pub model: Option<InducedMinorModel>,
    pub leaves: usize,
}

/// Induced-minor test for patterns whose every edge has an endpoint of
/// degree at most 2: branch with `delta = 3|V(H)|` and search each leaf
/// exhaustively. Minimal hosts of such patterns are `delta`-degenerate, so
/// one of them survives in some leaf whenever a model exists.
pub fn induced_minor_test(g: &Graph, h: &Graph) -> Result<InducedMinorTest> {
    if h.edges().iter().any(|&(u, v)| h.degree(u) > 2 && h.degree(v) > 2) {
        return invalid("every pattern edge needs an endpoint of degree at most 2");
    }
    let delta = 3 * h.n();
    let family = degeneracy_branch(g, delta, cube_root_ceil(g.n()) + delta)?;
    let opts = MinorSearch { cap: Some(LEAF_ORACLE_CAP), ..MinorSearch::default() };
    for leaf in &family.leaves {
        let (sub, map) = g.induced_subgraph(&leaf.x);
        if let Some(m) = search_induced_minor(&sub, h, &opts)? {
            let model = m.relabel_host(&map);
            assert!(verify_induced_minor_model(g, h, &model)?, "leaf model failed verification");
            return Ok(InducedMinorTest { model: Some(model), leaves: family.leaves.len() });
        }
    }
    Ok(InducedMinorTest { model: None, leaves: family.leaves.len() })
}

/// Vertex-minimal induced subgraph of `g` still containing `h`, found by one
/// ascending greedy deletion pass; returns the subgraph and its vertices.
pub fn minimal_model_host(g: &Graph, h: &Graph) -> Result<Option<(Graph, Vec<usize>)>> {
    let opts = MinorSearch { cap: Some(LEAF_ORACLE_CAP), ..MinorSearch::default() };
    if search_induced_minor(g, h, &opts)?.is_none() {
        return Ok(None);
    }
    let mut keep: Vec<usize> = (0..g.n()).collect();
    for v in 0..g.n() {
        let trial: Vec<usize> = keep.iter().copied().filter(|&w| w != v).collect();
        if search_induced_minor(&g.induced_subgraph(&trial).0, h, &opts)?.is_some() {
            keep = trial;
        }
    }
    Ok(Some((g.induced_subgraph(&keep).0, keep)))
}
