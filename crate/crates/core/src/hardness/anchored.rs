use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::midp::MidpInstance;
use crate::error::{invalid, Result};
use crate::graph::{complete_binary_tree, verify_induced_minor_model, Graph, InducedMinorModel};
use crate::oracles::{enumerate_induced_minor_models, search_induced_minor, MinorSearch};

/// Anchored induced minor instance: the branch set of `anchors[i].1` must
/// contain host vertex `anchors[i].0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredInstance {
    pub graph: Graph,
    pub tree: Graph,
    pub anchors: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct AnchoredWire {
    graph: serde_json::Value,
    tree: serde_json::Value,
    anchors: Vec<[usize; 2]>,
}

impl AnchoredInstance {
    pub fn to_json(&self) -> serde_json::Value {
        let wire = AnchoredWire {
            graph: self.graph.to_json(),
            tree: self.tree.to_json(),
            anchors: self.anchors.iter().map(|&(v, u)| [v, u]).collect(),
        };
        serde_json::to_value(wire).expect("instance serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let wire: AnchoredWire = serde_json::from_value(value.clone())?;
        let inst = AnchoredInstance {
            graph: Graph::from_json(&wire.graph)?,
            tree: Graph::from_json(&wire.tree)?,
            anchors: wire.anchors.iter().map(|&[v, u]| (v, u)).collect(),
        };
        if inst.anchors.iter().any(|&(v, u)| v >= inst.graph.n() || u >= inst.tree.n()) {
            return invalid("anchor out of range");
        }
        Ok(inst)
    }
}

pub fn verify_anchored_model(inst: &AnchoredInstance, model: &InducedMinorModel) -> Result<bool> {
    Ok(verify_induced_minor_model(&inst.graph, &inst.tree, model)?
        && inst.anchors.iter().all(|&(v, u)| model.branch_sets[u].binary_search(&v).is_ok()))
}

/// Anchored instance of a path problem, padded to an even number `k >= 4`
/// of parts with isolated singleton parts. Tree vertex `v_i` is `i` and
/// `u_i` is `k + i` (0-based); `w_i` is host vertex `n' + i` where `n'`
/// counts the padded path-problem vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredReduction {
    pub instance: AnchoredInstance,
    pub k: usize,
    /// Terminals after padding; a padded part has `s == t`.
    pub terminals: Vec<(usize, usize)>,
    pub w: Vec<usize>,
}

/// `w_i` universal to `V_i`, all edges between `V_i` and `V_j` whenever
/// `v_i v_j` is a tree edge, anchors `(w_i, u_i)`, `(s_i, v_i)`, `(t_i, v_i)`.
pub fn midp_to_anchored(inst: &MidpInstance) -> Result<AnchoredReduction> {
    if !inst.structure_ok() {
        return invalid("path instance violates its structural invariants");
    }
    let k0 = inst.k();
    let k = (k0 + k0 % 2).max(4);
    let n0 = inst.graph.n();
    let mut part = inst.part.clone();
    let mut terminals = inst.terminals.clone();
    for i in k0..k {
        let v = n0 + (i - k0);
        part.push(i);
        terminals.push((v, v));
    }
    let np = part.len();
    let w: Vec<usize> = (np..np + k).collect();

    let mut tree_edges: Vec<(usize, usize)> = (0..k).map(|i| (i, k + i)).collect();
    tree_edges.extend((0..k - 2).map(|i| (i, i + 2)));
    tree_edges.push((0, k - 1));
    let tree = Graph::from_edges(2 * k, tree_edges.iter().copied())?;

    let mut members = vec![Vec::new(); k];
    for (v, &p) in part.iter().enumerate() {
        members[p].push(v);
    }
    let mut edges: Vec<(usize, usize)> = inst.graph.edges().to_vec();
    for i in 0..k {
        edges.extend(members[i].iter().map(|&v| (v, w[i])));
    }
    for &(a, b) in tree_edges.iter().filter(|&&(a, b)| a < k && b < k) {
        for &x in &members[a] {
            edges.extend(members[b].iter().map(|&y| (x, y)));
        }
    }
    let graph = Graph::from_edges(np + k, edges)?;
    let mut anchors = Vec::with_capacity(3 * k);
    for i in 0..k {
        anchors.push((w[i], k + i));
        anchors.push((terminals[i].0, i));
        anchors.push((terminals[i].1, i));
    }
    Ok(AnchoredReduction { instance: AnchoredInstance { graph, tree, anchors }, k, terminals, w })
}

impl AnchoredReduction {
    /// Branch sets `P_i` for `v_i` and `{w_i}` for `u_i`; padded parts use
    /// their single vertex.
    pub fn witness(&self, paths: &[Vec<usize>]) -> InducedMinorModel {
        let mut sets: Vec<Vec<usize>> = (0..self.k)
            .map(|i| paths.get(i).cloned().unwrap_or_else(|| vec![self.terminals[i].0]))
            .collect();
        sets.extend(self.w.iter().map(|&w| vec![w]));
        InducedMinorModel::new(sets)
    }
}

/// Complete binary tree `B_height` whose root is identified with `host` in
/// the host graph and `tree` in the pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attachment {
    pub host: usize,
    pub tree: usize,
    pub height: u32,
}

/// Plain induced-minor instance kept in compressed form: the anchored
/// instance plus the trees `B_{h+2i}` attached at the `i`-th anchor on both
/// sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImtInstance {
    pub base: AnchoredInstance,
    pub h: u32,
    pub attachments: Vec<Attachment>,
}

/// Materialized host and pattern; `host_map[i][x]` and `tree_map[i][x]`
/// give the vertex of heap node `x` of attachment `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaterializedImt {
    pub graph: Graph,
    pub tree: Graph,
    pub host_map: Vec<Vec<usize>>,
    pub tree_map: Vec<Vec<usize>>,
}

pub fn anchored_to_imt(inst: &AnchoredInstance, h: u32) -> Result<ImtInstance> {
    if h == 0 {
        return invalid("attachment height parameter must be at least 1");
    }
    let attachments = inst
        .anchors
        .iter()
        .enumerate()
        .map(|(i, &(host, tree))| Attachment { host, tree, height: h + 2 * (i as u32 + 1) })
        .collect();
    Ok(ImtInstance { base: inst.clone(), h, attachments })
}

impl ImtInstance {
    fn added(&self) -> BigUint {
        self.attachments.iter().map(|a| (BigUint::from(1u8) << a.height) - 2u8).sum()
    }

    pub fn host_size(&self) -> BigUint {
        BigUint::from(self.base.graph.n()) + self.added()
    }

    pub fn tree_size(&self) -> BigUint {
        BigUint::from(self.base.tree.n()) + self.added()
    }

    /// Builds both graphs unless the host would exceed `budget` vertices.
    pub fn materialize(&self, budget: usize) -> Result<MaterializedImt> {
        if self.host_size() > BigUint::from(budget) || self.attachments.iter().any(|a| a.height > 30) {
            return invalid(format!("host of {} vertices exceeds the budget {budget}", self.host_size()));
        }
        fn attach(base: &Graph, roots: impl Iterator<Item = (usize, u32)>) -> Result<(Graph, Vec<Vec<usize>>)> {
            let mut n = base.n();
            let mut edges = base.edges().to_vec();
            let mut maps = Vec::new();
            for (root, height) in roots {
                let b = complete_binary_tree(height as usize)?;
                let map: Vec<usize> = (0..b.n()).map(|x| if x == 0 { root } else { n + x - 1 }).collect();
                n += b.n() - 1;
                edges.extend(b.edges().iter().map(|&(x, y)| (map[x], map[y])));
                maps.push(map);
            }
            Ok((Graph::from_edges(n, edges)?, maps))
        }
        let (graph, host_map) = attach(&self.base.graph, self.attachments.iter().map(|a| (a.host, a.height)))?;
        let (tree, tree_map) = attach(&self.base.tree, self.attachments.iter().map(|a| (a.tree, a.height)))?;
        Ok(MaterializedImt { graph, tree, host_map, tree_map })
    }

    /// Checks a model given on the base instance, with every attached tree
    /// mapped onto its copy vertex by vertex. The base model must be an
    /// induced minor model whose branch sets hold every attachment root; the
    /// attached copies then touch only their own root's branch set.
    pub fn verify_compressed(&self, base_model: &InducedMinorModel) -> Result<bool> {
        verify_anchored_model(&self.base, base_model)
    }

    /// The full model on a materialized instance.
    pub fn expand_model(&self, mat: &MaterializedImt, base_model: &InducedMinorModel) -> InducedMinorModel {
        let mut sets = base_model.branch_sets.clone();
        sets.resize(mat.tree.n(), Vec::new());
        for (hm, tm) in mat.host_map.iter().zip(&mat.tree_map) {
            for x in 1..hm.len() {
                sets[tm[x]] = vec![hm[x]];
            }
        }
        InducedMinorModel::new(sets)
    }

    pub fn manifest(&self) -> serde_json::Value {
        serde_json::json!({
            "h": self.h,
            "attachments": self.attachments,
            "host_vertices": self.host_size().to_string(),
            "tree_vertices": self.tree_size().to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttachmentClaims {
    /// `g0` excludes `B_{h+1}` as an induced minor.
    pub precondition: bool,
    /// Models of `B_{h+2}` in the attached graph.
    pub models: usize,
    /// Every model puts the anchor in the root's branch set.
    pub root_holds_anchor: bool,
    /// Every model maps each non-root tree vertex to a single vertex of the
    /// attached copy.
    pub copies_forced: bool,
}

/// Enumerates every model of `B_{h+2}` in `g0` with `B_{h+2}` glued at `v`
/// and checks the attachment claims on each.
pub fn check_attachment_claims(g0: &Graph, v: usize, h: u32, cap: usize) -> Result<AttachmentClaims> {
    let base = AnchoredInstance { graph: g0.clone(), tree: Graph::empty(1), anchors: vec![(v, 0)] };
    let mut imt = anchored_to_imt(&base, h)?;
    imt.attachments[0].height = h + 2;
    let mat = imt.materialize(cap)?;
    let b = complete_binary_tree(h as usize + 2)?;
    let opts = MinorSearch { cap: Some(cap), ..MinorSearch::default() };
    let precondition = search_induced_minor(g0, &complete_binary_tree(h as usize + 1)?, &opts)?.is_none();
    let models = enumerate_induced_minor_models(&mat.graph, &b, &opts, None)?;
    let root_holds_anchor = models.iter().all(|m| m.branch_sets[0].contains(&v));
    let copies_forced = models.iter().all(|m| m.branch_sets[1..].iter().all(|s| s.len() == 1 && s[0] >= g0.n()));
    Ok(AttachmentClaims { precondition, models: models.len(), root_holds_anchor, copies_forced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    #[test]
    fn tree_shape_for_six_parts() {
        let inst = MidpInstance {
            graph: Graph::empty(12),
            part: (0..12).map(|v| v / 2).collect(),
            terminals: (0..6).map(|i| (2 * i, 2 * i + 1)).collect(),
        };
        let red = midp_to_anchored(&inst).unwrap();
        assert_eq!(red.instance.tree.n(), 12);
        assert_eq!(red.instance.anchors.len(), 18);
        assert!(red.instance.tree.is_connected() && red.instance.tree.m() == 11);
        for i in 0..6 {
            let nb: Vec<usize> = red.instance.graph.neighbors(red.w[i]).to_vec();
            assert_eq!(nb, vec![2 * i, 2 * i + 1]);
        }
        let paths: Vec<Vec<usize>> = Vec::new();
        assert!(!verify_anchored_model(&red.instance, &red.witness(&paths)).unwrap());
    }

    #[test]
    fn attachment_sizes() {
        let base = AnchoredInstance { graph: complete(2), tree: complete(2), anchors: vec![(0, 0)] };
        let imt = anchored_to_imt(&base, 1).unwrap();
        assert_eq!(imt.host_size(), BigUint::from(8u8));
        let mat = imt.materialize(100).unwrap();
        assert_eq!(mat.graph.n(), 8);
        let model = InducedMinorModel::new(vec![vec![0], vec![1]]);
        assert!(imt.verify_compressed(&model).unwrap());
        assert!(verify_induced_minor_model(&mat.graph, &mat.tree, &imt.expand_model(&mat, &model)).unwrap());
        assert!(imt.materialize(7).is_err());
    }

    #[test]
    fn attachment_claims_on_a_clique() {
        let c = check_attachment_claims(&complete(3), 1, 1, 12).unwrap();
        assert!(c.precondition && c.root_holds_anchor && c.copies_forced && c.models > 0);
    }
}
