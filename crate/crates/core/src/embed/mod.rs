//! Induced almost-embeddings by Moser–Tardos resampling, their conversion
//! to induced minor models, and the separator-or-model driver.

mod driver;
mod extract;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::flow::ConcurrentFlow;
use crate::graph::Graph;

pub use driver::{find_separator_or_model, SeparatorConfig, SeparatorOrModel, SeparatorReport};
pub use extract::{embed_induced_minor, extract_model, EmbedReport};

/// `phi` maps pattern vertices to host vertices; `pi[e]` is the host path
/// for the `e`-th pattern edge `(u, v)`, `u < v`, running `phi(u)` to `phi(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedAlmostEmbedding {
    pub phi: Vec<usize>,
    pub pi: Vec<Vec<usize>>,
}

/// Unordered pairs of distinct non-incident pattern edges, as edge indices
/// `(e, f)` with `e < f`, in lexicographic order.
pub fn collision_events(pattern: &Graph) -> Vec<(usize, usize)> {
    let edges = pattern.edges();
    let mut out = Vec::new();
    for (e, &(a, b)) in edges.iter().enumerate() {
        for (f, &(c, d)) in edges.iter().enumerate().skip(e + 1) {
            if a != c && a != d && b != c && b != d {
                out.push((e, f));
            }
        }
    }
    out
}

/// For each event, the number of other events sharing a variable with it:
/// those containing an edge incident to one of its four pattern vertices.
pub fn dependency_degrees(pattern: &Graph) -> Vec<usize> {
    let edges = pattern.edges();
    let events = collision_events(pattern);
    let touches = |ev: (usize, usize), vs: [usize; 4]| {
        let (a, b) = edges[ev.0];
        let (c, d) = edges[ev.1];
        [a, b, c, d].iter().any(|x| vs.contains(x))
    };
    events
        .iter()
        .map(|&ev| {
            let (a, b) = edges[ev.0];
            let (c, d) = edges[ev.1];
            events.iter().filter(|&&other| other != ev && touches(other, [a, b, c, d])).count()
        })
        .collect()
}

fn mark_closed_neighborhood(g: &Graph, path: &[usize], mark: &mut [u32], stamp: u32) {
    for &v in path {
        mark[v] = stamp;
        for &w in g.neighbors(v) {
            mark[w] = stamp;
        }
    }
}

/// Vertex-disjoint with no host edge between them.
pub fn mutually_induced(g: &Graph, p: &[usize], q: &[usize]) -> bool {
    let mut mark = vec![0u32; g.n()];
    mark_closed_neighborhood(g, p, &mut mark, 1);
    q.iter().all(|&v| mark[v] == 0)
}

/// Checks both defining conditions. Ids out of range or wrong arity are
/// input errors.
pub fn verify_almost_embedding(g: &Graph, pattern: &Graph, iae: &InducedAlmostEmbedding) -> Result<bool> {
    if iae.phi.len() != pattern.n() || iae.pi.len() != pattern.m() {
        return invalid("almost-embedding arity does not match the pattern");
    }
    if iae.phi.iter().chain(iae.pi.iter().flatten()).any(|&v| v >= g.n()) {
        return invalid("almost-embedding references a host vertex out of range");
    }
    for (e, &(u, v)) in pattern.edges().iter().enumerate() {
        let p = &iae.pi[e];
        if p.first() != Some(&iae.phi[u]) || p.last() != Some(&iae.phi[v]) || !is_simple_path(g, p) {
            return Ok(false);
        }
    }
    Ok(collision_events(pattern).iter().all(|&(e, f)| mutually_induced(g, &iae.pi[e], &iae.pi[f])))
}

fn is_simple_path(g: &Graph, p: &[usize]) -> bool {
    let mut sorted = p.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == p.len() && p.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

/// Inverse-distribution sampling: the `a`-`b` path whose cumulative weight
/// interval, in lexicographic path order, contains `x`.
pub fn sample_path(flow: &ConcurrentFlow, a: usize, b: usize, x: f64) -> Result<Vec<usize>> {
    if a >= flow.n() || b >= flow.n() {
        return invalid(format!("pair ({a},{b}) out of range"));
    }
    let total: f64 = flow.pair_paths(a, b).map(|(_, w)| w).sum();
    if !(total > 0.0) {
        return invalid(format!("no positive-weight path for ({a},{b})"));
    }
    let target = x.clamp(0.0, 1.0) * total;
    let mut acc = 0.0;
    let mut last = None;
    for (p, w) in flow.pair_paths(a, b) {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = Some(p);
        if target < acc {
            return Ok(p.to_vec());
        }
    }
    Ok(last.expect("positive total").to_vec())
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlmostEmbedReport {
    pub embedding: InducedAlmostEmbedding,
    pub resamples: u64,
    pub events: usize,
}

/// Default resample cap: `100 * events^2`, at least 100.
pub fn default_resample_cap(pattern: &Graph) -> u64 {
    let k = collision_events(pattern).len() as u64;
    (100 * k * k).max(100)
}

/// Moser–Tardos: sample every `phi(v)` uniformly and every `x_e` uniformly
/// in `[0, 1)`, then resample the variables of the lexicographically first
/// colliding edge pair until none collide.
pub fn almost_embed(
    g: &Graph,
    pattern: &Graph,
    flow: &ConcurrentFlow,
    seed: u64,
    max_resamples: Option<u64>,
) -> Result<AlmostEmbedReport> {
    if pattern.max_degree() > 3 {
        return invalid("pattern must be subcubic");
    }
    if flow.n() != g.n() || g.n() == 0 {
        return invalid("flow does not belong to the host graph");
    }
    let cap = max_resamples.unwrap_or_else(|| default_resample_cap(pattern));
    let events = collision_events(pattern);
    let edges = pattern.edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n();
    let mut phi: Vec<usize> = (0..pattern.n()).map(|_| rng.gen_range(0..n)).collect();
    let mut x: Vec<f64> = (0..pattern.m()).map(|_| rng.gen::<f64>()).collect();
    let mut pi = Vec::with_capacity(edges.len());
    for (e, &(u, v)) in edges.iter().enumerate() {
        pi.push(sample_path(flow, phi[u], phi[v], x[e])?);
    }

    let mut mark = vec![0u32; n];
    let mut stamp = 0u32;
    let mut collide = |p: &[usize], q: &[usize]| {
        stamp += 1;
        mark_closed_neighborhood(g, p, &mut mark, stamp);
        q.iter().any(|&v| mark[v] == stamp)
    };
    let mut resamples = 0u64;
    // events before `start` were clear and none of their variables changed
    let mut start = 0;
    loop {
        let Some(pos) = (start..events.len()).find(|&i| collide(&pi[events[i].0], &pi[events[i].1])) else {
            break;
        };
        if resamples >= cap {
            return Err(Error::EmbeddingFailed { resamples });
        }
        resamples += 1;
        let (e, f) = events[pos];
        let verts = [edges[e].0, edges[e].1, edges[f].0, edges[f].1];
        for &v in &verts {
            phi[v] = rng.gen_range(0..n);
        }
        x[e] = rng.gen::<f64>();
        x[f] = rng.gen::<f64>();
        let mut changed = vec![false; edges.len()];
        for (k, &(u, v)) in edges.iter().enumerate() {
            if verts.contains(&u) || verts.contains(&v) {
                pi[k] = sample_path(flow, phi[u], phi[v], x[k])?;
                changed[k] = true;
            }
        }
        start = events.iter().position(|&(a, b)| changed[a] || changed[b]).unwrap_or(pos).min(pos);
    }
    Ok(AlmostEmbedReport { embedding: InducedAlmostEmbedding { phi, pi }, resamples, events: events.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use crate::graph::subdivide;

    #[test]
    fn sample_path_examples() {
        let k2 = complete(2);
        let f = ConcurrentFlow::shortest_paths(&k2).unwrap();
        assert_eq!(sample_path(&f, 0, 1, 0.7).unwrap(), vec![0, 1]);
        assert_eq!(sample_path(&f, 1, 1, 0.2).unwrap(), vec![1]);

        let g = cycle(4);
        let mut paths: Vec<(Vec<usize>, f64)> = ConcurrentFlow::shortest_paths(&g)
            .unwrap()
            .paths()
            .filter(|(p, _)| !(p[0] == 0 && p[p.len() - 1] == 2))
            .map(|(p, w)| (p.to_vec(), w))
            .collect();
        paths.push((vec![0, 1, 2], 0.25));
        paths.push((vec![0, 3, 2], 0.75));
        let f = ConcurrentFlow::from_paths(&g, paths).unwrap();
        assert_eq!(sample_path(&f, 0, 2, 0.1).unwrap(), vec![0, 1, 2]);
        assert_eq!(sample_path(&f, 0, 2, 0.5).unwrap(), vec![0, 3, 2]);
        assert_eq!(sample_path(&f, 0, 2, 1.0).unwrap(), vec![0, 3, 2]);
    }

    #[test]
    fn single_edge_pattern_has_no_events() {
        let g = grid(3, 3);
        let f = ConcurrentFlow::shortest_paths(&g).unwrap();
        let r = almost_embed(&g, &complete(2), &f, 7, None).unwrap();
        assert_eq!((r.events, r.resamples), (0, 0));
        assert!(verify_almost_embedding(&g, &complete(2), &r.embedding).unwrap());
    }

    #[test]
    fn c6_in_p3_exhausts_cap() {
        let g = path(3);
        let f = ConcurrentFlow::shortest_paths(&g).unwrap();
        let c6 = cycle(6);
        for seed in 0..20 {
            assert!(matches!(almost_embed(&g, &c6, &f, seed, None), Err(Error::EmbeddingFailed { .. })));
        }
    }

    #[test]
    fn dependency_degree_bound() {
        for h in [cycle(6), complete(4), petersen()] {
            let hdd = subdivide(&h, 2).unwrap().graph;
            let bound = 12 * hdd.m();
            assert!(dependency_degrees(&hdd).iter().all(|&d| d <= bound));
        }
    }

    #[test]
    fn verifier_rejects_collisions() {
        let g = path(6);
        let p = path(4);
        let ok = InducedAlmostEmbedding { phi: vec![0, 1, 4, 5], pi: vec![vec![0, 1], vec![1, 2, 3, 4], vec![4, 5]] };
        assert!(verify_almost_embedding(&g, &p, &ok).unwrap());
        let close = InducedAlmostEmbedding { phi: vec![0, 1, 2, 3], pi: vec![vec![0, 1], vec![1, 2], vec![2, 3]] };
        assert!(!verify_almost_embedding(&g, &p, &close).unwrap());
    }
}
