use super::{almost_embed, verify_almost_embedding, InducedAlmostEmbedding};
use crate::error::{invalid, Result};
use crate::flow::ConcurrentFlow;
use crate::graph::{make_subcubic, subdivide, Graph, InducedMinorModel};

/// Turns an induced almost-embedding of `H` subdivided twice into a model
/// of `H` subdivided once (ids as produced by [`subdivide`]).
///
/// Original vertices take the union of their incident paths. The vertex
/// subdividing `uv` (double path `u, x, y, v`) takes the stretch of a BFS
/// `phi(u)`-`phi(v)` path inside `pi(ux) ∪ pi(xy) ∪ pi(yv)` that lies
/// strictly between its last visit to `pi(ux)` and its first visit to
/// `pi(yv)`.
pub fn extract_model(g: &Graph, h: &Graph, iae: &InducedAlmostEmbedding) -> Result<InducedMinorModel> {
    if (0..h.n()).any(|v| h.degree(v) == 0) {
        return invalid("pattern has an isolated vertex");
    }
    let hdd = subdivide(h, 2)?;
    if !verify_almost_embedding(g, &hdd.graph, iae)? {
        return invalid("not an induced almost-embedding");
    }
    let pi_of = |a: usize, b: usize| &iae.pi[hdd.graph.edge_index(a, b).expect("subdivision edge")];

    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); h.n() + h.m()];
    for v in 0..h.n() {
        for &w in hdd.graph.neighbors(v) {
            sets[v].extend_from_slice(pi_of(v, w));
        }
    }
    for (k, path) in hdd.edge_paths.iter().enumerate() {
        let (u, x, y, v) = (path[0], path[1], path[2], path[3]);
        let (pux, pxy, pyv) = (pi_of(u, x), pi_of(x, y), pi_of(y, v));
        let mut allowed = vec![false; g.n()];
        let mut tag = vec![0u8; g.n()];
        for &w in pux.iter().chain(pxy).chain(pyv) {
            allowed[w] = true;
        }
        for &w in pux {
            tag[w] = 1;
        }
        for &w in pyv {
            tag[w] = 2;
        }
        let walk = g.bfs_path(iae.phi[u], iae.phi[v], Some(&allowed)).expect("union of paths is connected");
        let j = walk.iter().position(|&w| tag[w] == 2).expect("walk ends in pi(yv)");
        let i = walk[..j].iter().rposition(|&w| tag[w] == 1).expect("walk starts in pi(ux)");
        sets[h.n() + k] = walk[i + 1..j].to_vec();
    }
    Ok(InducedMinorModel::new(sets))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbedReport {
    pub model: InducedMinorModel,
    pub resamples: u64,
}

/// Model of `H` from a flow: subcubic expansion, double subdivision,
/// almost-embedding, extraction, then the back-maps. An edgeless pattern
/// is first tried as singletons on a greedy independent set.
pub fn embed_induced_minor(
    g: &Graph,
    h: &Graph,
    flow: &ConcurrentFlow,
    seed: u64,
    max_resamples: Option<u64>,
) -> Result<EmbedReport> {
    if h.n() == 0 {
        return Ok(EmbedReport { model: InducedMinorModel::default(), resamples: 0 });
    }
    if h.m() == 0 {
        let mut chosen: Vec<usize> = Vec::new();
        for v in 0..g.n() {
            if chosen.len() < h.n() && chosen.iter().all(|&u| !g.has_edge(u, v)) {
                chosen.push(v);
            }
        }
        if chosen.len() == h.n() {
            let model = InducedMinorModel::new(chosen.into_iter().map(|v| vec![v]).collect());
            return Ok(EmbedReport { model, resamples: 0 });
        }
    }
    let sub = make_subcubic(h);
    let hdd = subdivide(&sub.graph, 2)?;
    let report = almost_embed(g, &hdd.graph, flow, seed, max_resamples)?;
    let dotted = extract_model(g, &sub.graph, &report.embedding)?;
    let once = subdivide(&sub.graph, 1)?;
    let model = sub.back_map.apply(&once.back_map.apply(&dotted));
    Ok(EmbedReport { model, resamples: report.resamples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use crate::graph::verify_induced_minor_model;

    #[test]
    fn k2_on_a_path() {
        // P4 pattern 0-2-3-1 laid straight on a long path
        let g = path(8);
        let iae = InducedAlmostEmbedding { phi: vec![0, 7, 2, 5], pi: vec![vec![0, 1, 2], vec![7, 6, 5], vec![2, 3, 4, 5]] };
        let h = complete(2);
        let hdd = subdivide(&h, 2).unwrap().graph;
        assert_eq!(hdd.edges(), &[(0, 2), (1, 3), (2, 3)]);
        let m = extract_model(&g, &h, &iae).unwrap();
        let hd = subdivide(&h, 1).unwrap().graph;
        assert!(verify_induced_minor_model(&g, &hd, &m).unwrap());
        assert_eq!(m.branch_sets, vec![vec![0, 1, 2], vec![5, 6, 7], vec![3, 4]]);
    }

    #[test]
    fn colliding_embedding_rejected() {
        let g = path(4);
        let iae = InducedAlmostEmbedding { phi: vec![0, 3, 1, 2], pi: vec![vec![0, 1], vec![3, 2], vec![1, 2]] };
        assert!(extract_model(&g, &complete(2), &iae).is_err());
    }

    #[test]
    fn two_edge_path_in_grid() {
        let g = grid(5, 5);
        let h = path(3);
        // induced snake through rows 0, 2 and 4 of the grid
        let snake = [0, 1, 2, 3, 4, 9, 14, 13, 12, 11, 10, 15, 20];
        // doubled path: 0 - 3 - 4 - 1 - 5 - 6 - 2
        let order = [0, 3, 4, 1, 5, 6, 2];
        let hdd = subdivide(&h, 2).unwrap().graph;
        let mut phi = vec![0; 7];
        let mut pi = vec![Vec::new(); hdd.m()];
        for (i, &p) in order.iter().enumerate() {
            phi[p] = snake[2 * i];
        }
        for i in 0..6 {
            let (a, b) = (order[i], order[i + 1]);
            let mut seg = snake[2 * i..=2 * i + 2].to_vec();
            if a > b {
                seg.reverse();
            }
            pi[hdd.edge_index(a, b).unwrap()] = seg;
        }
        let iae = InducedAlmostEmbedding { phi, pi };
        let m = extract_model(&g, &h, &iae).unwrap();
        assert!(verify_induced_minor_model(&g, &subdivide(&h, 1).unwrap().graph, &m).unwrap());
    }

    #[test]
    fn edgeless_patterns_use_independent_vertices() {
        let g = path(5);
        let f = ConcurrentFlow::shortest_paths(&g).unwrap();
        let r = embed_induced_minor(&g, &Graph::empty(1), &f, 0, None).unwrap();
        assert_eq!(r.model.branch_sets, vec![vec![0]]);
        let r = embed_induced_minor(&g, &Graph::empty(3), &f, 0, None).unwrap();
        assert!(verify_induced_minor_model(&g, &Graph::empty(3), &r.model).unwrap());
    }
}
