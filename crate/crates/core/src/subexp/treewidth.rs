use std::collections::VecDeque;

use crate::embed::{find_separator_or_model, SeparatorConfig, SeparatorOrModel};
use crate::error::{invalid, Error, Result};
use crate::graph::{verify_tree_decomposition, Graph, TreeDecomposition};

/// Bags above this size are rejected by the DP.
pub const MAX_DP_BAG: usize = 24;

/// Tree decomposition by recursive balanced separators: small graphs become
/// one bag, otherwise the separator is added to every bag below a root bag
/// holding it. Finding a model of `h` instead aborts with
/// [`Error::ModelFound`] in the ids of `g`.
pub fn tree_decomposition_via_separators(
    g: &Graph,
    h: &Graph,
    leaf_size: usize,
    cfg: &SeparatorConfig,
) -> Result<TreeDecomposition> {
    let mut bags = Vec::new();
    let mut edges = Vec::new();
    let ids: Vec<usize> = (0..g.n()).collect();
    build(g, &ids, h, leaf_size.max(1), cfg, &mut bags, &mut edges)?;
    let tree = Graph::from_edges(bags.len(), edges)?;
    Ok(TreeDecomposition { tree, bags })
}

fn build(
    g: &Graph,
    ids: &[usize],
    h: &Graph,
    leaf_size: usize,
    cfg: &SeparatorConfig,
    bags: &mut Vec<Vec<usize>>,
    edges: &mut Vec<(usize, usize)>,
) -> Result<usize> {
    let root = bags.len();
    if g.n() <= leaf_size {
        bags.push(ids.to_vec());
        return Ok(root);
    }
    let sep = match find_separator_or_model(g, h, cfg)?.outcome {
        SeparatorOrModel::Model(m) => return Err(Error::ModelFound(Box::new(m.relabel_host(ids)))),
        SeparatorOrModel::Separator(sep) => sep,
    };
    let top: Vec<usize> = sep.s.iter().map(|&v| ids[v]).collect();
    bags.push(top.clone());
    let mut alive = vec![true; g.n()];
    for &v in &sep.s {
        alive[v] = false;
    }
    for comp in g.components_within(&alive) {
        let (sub, map) = g.induced_subgraph(&comp);
        let sub_ids: Vec<usize> = map.iter().map(|&v| ids[v]).collect();
        let start = bags.len();
        let child = build(&sub, &sub_ids, h, leaf_size, cfg, bags, edges)?;
        for bag in &mut bags[start..] {
            bag.extend_from_slice(&top);
            bag.sort_unstable();
        }
        edges.push((root, child));
    }
    Ok(root)
}

/// Maximum independent set by the subset-per-bag DP over the decomposition
/// rooted at node 0.
pub fn mis_treewidth_dp(g: &Graph, td: &TreeDecomposition) -> Result<Vec<usize>> {
    if !verify_tree_decomposition(g, td)? {
        return invalid("tree decomposition does not verify");
    }
    if let Some(b) = td.bags.iter().find(|b| b.len() > MAX_DP_BAG) {
        return invalid(format!("bag of size {} exceeds the DP limit {MAX_DP_BAG}", b.len()));
    }
    let t = &td.tree;
    let mut parent = vec![usize::MAX; t.n()];
    let mut order = vec![0];
    let mut queue = VecDeque::from([0]);
    parent[0] = 0;
    while let Some(x) = queue.pop_front() {
        for &y in t.neighbors(x) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    let children: Vec<Vec<usize>> =
        (0..t.n()).map(|x| t.neighbors(x).iter().copied().filter(|&y| y != 0 && parent[y] == x).collect()).collect();

    let bags = &td.bags;
    let inner_adj: Vec<Vec<u32>> = bags
        .iter()
        .map(|bag| bag.iter().map(|&v| bag.iter().enumerate().fold(0u32, |m, (j, &w)| if g.has_edge(v, w) { m | 1 << j } else { m })).collect())
        .collect();
    let independent = |node: usize, mask: u32| (0..bags[node].len()).all(|i| mask >> i & 1 == 0 || inner_adj[node][i] & mask == 0);
    // restrict a mask over bag `from` to the positions of `onto` it shares
    let restrict = |from: usize, onto: usize| -> Vec<Option<usize>> {
        bags[from].iter().map(|v| bags[onto].binary_search(v).ok()).collect()
    };
    let project = |mask: u32, map: &[Option<usize>]| {
        map.iter().enumerate().fold(0u32, |m, (i, &j)| match j {
            Some(j) if mask >> i & 1 == 1 => m | 1 << j,
            _ => m,
        })
    };

    let mut value: Vec<Vec<i64>> = vec![Vec::new(); t.n()];
    // choice[c][parent mask] = best child mask
    let mut choice: Vec<Vec<u32>> = vec![Vec::new(); t.n()];
    for &x in order.iter().rev() {
        let k = bags[x].len();
        let mut val: Vec<i64> = (0..1u32 << k).map(|m| if independent(x, m) { m.count_ones() as i64 } else { i64::MIN }).collect();
        for &c in &children[x] {
            let up = restrict(c, x);
            let down = restrict(x, c);
            let kc = bags[c].len();
            let shared_in_child: u32 = up.iter().enumerate().fold(0, |m, (i, j)| if j.is_some() { m | 1 << i } else { m });
            // best child mask per shared pattern, keyed by the child-side mask
            let mut best: Vec<(i64, u32)> = vec![(i64::MIN, 0); 1 << kc];
            for mc in 0..1u32 << kc {
                let v = value[c][mc as usize];
                if v == i64::MIN {
                    continue;
                }
                let key = (mc & shared_in_child) as usize;
                let score = v - (mc & shared_in_child).count_ones() as i64;
                if score > best[key].0 {
                    best[key] = (score, mc);
                }
            }
            let mut pick = vec![0u32; 1 << k];
            for m in 0..1u32 << k {
                if val[m as usize] == i64::MIN {
                    continue;
                }
                let (score, mc) = best[project(m, &down) as usize];
                debug_assert!(score != i64::MIN);
                val[m as usize] += score;
                pick[m as usize] = mc;
            }
            choice[c] = pick;
        }
        value[x] = val;
    }

    let mut chosen = vec![0u32; t.n()];
    chosen[0] = (0..value[0].len()).max_by_key(|&m| (value[0][m], usize::MAX - m)).unwrap() as u32;
    let mut out = Vec::new();
    for &x in &order {
        if x != 0 {
            chosen[x] = choice[x][chosen[parent[x]] as usize];
        }
        out.extend(bags[x].iter().enumerate().filter(|&(i, _)| chosen[x] >> i & 1 == 1).map(|(_, &v)| v));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    fn cfg() -> SeparatorConfig {
        SeparatorConfig::default()
    }

    #[test]
    fn path_decomposes_and_verifies() {
        let g = path(9);
        let td = tree_decomposition_via_separators(&g, &complete(5), 2, &cfg()).unwrap();
        assert!(verify_tree_decomposition(&g, &td).unwrap());
    }

    #[test]
    fn small_graph_is_one_bag() {
        let td = tree_decomposition_via_separators(&complete(5), &cycle(4), 5, &cfg()).unwrap();
        assert_eq!((td.bags.len(), td.width()), (1, 4));
    }

    #[test]
    fn grid_decomposition() {
        let g = grid(5, 5);
        let td = tree_decomposition_via_separators(&g, &complete(5), 8, &cfg()).unwrap();
        assert!(verify_tree_decomposition(&g, &td).unwrap());
        assert!(td.width() <= 24);
    }

    #[test]
    fn dp_examples() {
        for (g, want) in [(path(4), 2), (cycle(5), 2), (petersen(), 4), (grid(3, 3), 5)] {
            let td = tree_decomposition_via_separators(&g, &complete(5), 3, &cfg()).unwrap();
            let s = mis_treewidth_dp(&g, &td).unwrap();
            assert_eq!(s.len(), want);
            assert!(s.iter().all(|&a| s.iter().all(|&b| !g.has_edge(a, b))));
        }
    }

    #[test]
    fn dp_rejects_bad_decomposition() {
        let td = TreeDecomposition::path(vec![vec![0, 1], vec![2, 3]]);
        assert!(mis_treewidth_dp(&path(4), &td).is_err());
    }
}
