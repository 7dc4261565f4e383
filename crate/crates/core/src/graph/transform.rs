use super::{BackMap, Graph};
use crate::error::{invalid, Result};

/// A graph with every edge replaced by a path with `times` internal vertices.
///
/// Original vertices keep their ids; the internal vertices of the `k`-th
/// original edge (in sorted edge order) are `n + k * times + j`, numbered
/// from the smaller endpoint outwards.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: Graph,
    pub original_n: usize,
    pub times: usize,
    /// `edge_paths[k]` is the full path `[u, s_1, .., s_times, v]` for the
    /// `k`-th original edge `uv` with `u < v`.
    pub edge_paths: Vec<Vec<usize>>,
    /// Contracts each path back onto its endpoints: the first half of the
    /// internal vertices merge into `u`, the rest into `v`.
    pub back_map: BackMap,
}

pub fn subdivide(g: &Graph, times: usize) -> Result<Subdivision> {
    if !(1..=2).contains(&times) {
        return invalid(format!("subdivision count must be 1 or 2, got {times}"));
    }
    let n = g.n();
    let mut edges = Vec::with_capacity(g.m() * (times + 1));
    let mut edge_paths = Vec::with_capacity(g.m());
    let mut groups: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        let mut path = vec![u];
        path.extend((0..times).map(|j| n + k * times + j));
        path.push(v);
        for w in path.windows(2) {
            edges.push((w[0], w[1]));
        }
        // times = 1 merges the midpoint into u; times = 2 splits x -> u, y -> v
        groups[u].push(path[1]);
        if times == 2 {
            groups[v].push(path[2]);
        }
        edge_paths.push(path);
    }
    for grp in groups.iter_mut() {
        grp.sort_unstable();
    }
    Ok(Subdivision {
        graph: Graph::from_normalized(n + g.m() * times, edges),
        original_n: n,
        times,
        edge_paths,
        back_map: BackMap { groups },
    })
}

/// Subcubic graph containing the input as an induced minor, with the map
/// that turns a model of the subcubic graph into a model of the input.
#[derive(Clone, Debug)]
pub struct Subcubic {
    pub graph: Graph,
    pub back_map: BackMap,
}

/// Adds a pendant to each isolated vertex, then expands each vertex of
/// degree `d > 3` into a caterpillar path of `d - 2` nodes whose ports take
/// the neighbors in ascending id order (two, then one each, then two).
///
/// Ids `0..n` are the first node of each original vertex, pendants follow
/// as `n..`, then the extra caterpillar nodes.
pub fn make_subcubic(h: &Graph) -> Subcubic {
    let n = h.n();
    let isolated: Vec<usize> = (0..n).filter(|&v| h.degree(v) == 0).collect();
    let mut edges: Vec<(usize, usize)> = h.edges().to_vec();
    for (i, &v) in isolated.iter().enumerate() {
        edges.push((v, n + i));
    }
    let with_pendants = Graph::from_normalized(n + isolated.len(), edges);
    let base = with_pendants.n();

    // nodes[v] = caterpillar nodes of v, first one is v itself
    let mut next = base;
    let mut nodes: Vec<Vec<usize>> = Vec::with_capacity(base);
    for v in 0..base {
        let d = with_pendants.degree(v);
        let mut list = vec![v];
        if d > 3 {
            list.extend(next..next + d - 3);
            next += d - 3;
        }
        nodes.push(list);
    }
    let port = |v: usize, w: usize| -> usize {
        let list = &nodes[v];
        if list.len() == 1 {
            return v;
        }
        let d = with_pendants.degree(v);
        let i = with_pendants.neighbors(v).binary_search(&w).expect("neighbor");
        match i {
            0 | 1 => list[0],
            _ if i >= d - 2 => list[d - 3],
            _ => list[i - 1],
        }
    };
    let mut out = Vec::new();
    for list in &nodes {
        for w in list.windows(2) {
            out.push((w[0], w[1]));
        }
    }
    for &(u, v) in with_pendants.edges() {
        out.push((port(u, v), port(v, u)));
    }
    let graph = Graph::from_normalized(next, out);

    let mut groups: Vec<Vec<usize>> = (0..n).map(|v| nodes[v].clone()).collect();
    for (i, &v) in isolated.iter().enumerate() {
        groups[v].extend(nodes[n + i].iter().copied());
    }
    Subcubic { graph, back_map: BackMap { groups } }
}

/// `B_h`: one vertex for `h = 1`, otherwise each leaf of `B_{h-1}` gets two
/// children. Heap numbering, root 0, children of `i` are `2i+1`, `2i+2`.
pub fn complete_binary_tree(h: usize) -> Result<Graph> {
    if h == 0 || h > 30 {
        return invalid(format!("binary tree height must be in 1..=30, got {h}"));
    }
    let n = (1usize << h) - 1;
    Ok(Graph::from_normalized(n, (1..n).map(|i| ((i - 1) / 2, i)).collect()))
}

#[cfg(test)]
mod tests {
    use super::super::generators::*;
    use super::super::{verify_induced_minor_model, InducedMinorModel};
    use super::*;

    #[test]
    fn subdivide_examples() {
        let p4 = subdivide(&complete(2), 2).unwrap();
        assert_eq!(p4.edge_paths, vec![vec![0, 2, 3, 1]]);
        assert!(p4.graph.is_connected() && p4.graph.max_degree() == 2 && p4.graph.m() == 3);
        let c6 = subdivide(&complete(3), 1).unwrap().graph;
        assert_eq!((c6.n(), c6.m()), (6, 6));
        assert!(c6.is_connected() && (0..6).all(|v| c6.degree(v) == 2));
        let e = subdivide(&Graph::empty(3), 2).unwrap();
        assert_eq!(e.graph, Graph::empty(3));
        assert!(subdivide(&complete(2), 3).is_err());
    }

    #[test]
    fn subcubic_identity_on_c4() {
        let s = make_subcubic(&cycle(4));
        assert_eq!(s.graph, cycle(4));
        assert_eq!(s.back_map, BackMap::identity(4));
    }

    #[test]
    fn subcubic_isolated_vertex_gets_pendant() {
        let s = make_subcubic(&Graph::empty(1));
        assert_eq!(s.graph, complete(2));
        assert_eq!(s.back_map.groups, vec![vec![0, 1]]);
    }

    #[test]
    fn subcubic_k5_degrees_and_sizes() {
        let k5 = complete(5);
        let s = make_subcubic(&k5);
        assert!(s.graph.max_degree() <= 3);
        assert!(s.graph.n() <= 2 * k5.n() + k5.m());
        assert!(s.graph.m() <= 2 * k5.m() + k5.n());
        // identity model of H'' in itself maps back to a model of K5
        let id = InducedMinorModel::new((0..s.graph.n()).map(|v| vec![v]).collect());
        let back = s.back_map.apply(&id);
        assert!(verify_induced_minor_model(&s.graph, &k5, &back).unwrap());
    }

    #[test]
    fn binary_trees() {
        assert_eq!(complete_binary_tree(1).unwrap().n(), 1);
        let b2 = complete_binary_tree(2).unwrap();
        assert_eq!(b2, star(2));
        let b4 = complete_binary_tree(4).unwrap();
        assert_eq!((b4.n(), b4.m()), (15, 14));
        assert!(complete_binary_tree(0).is_err());
    }
}
