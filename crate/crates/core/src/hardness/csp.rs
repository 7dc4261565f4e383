use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{verify_minor_model, Graph, InducedMinorModel};

/// `r[p][q]`: the lower endpoint may take `p` while the upper takes `q`.
/// Values are `0..3` here and `1..=3` in JSON.
pub type Relation = [[bool; 3]; 3];

pub const FULL: Relation = [[true; 3]; 3];
pub const EQUAL: Relation = [[true, false, false], [false, true, false], [false, false, true]];
pub const UNEQUAL: Relation = [[false, true, true], [true, false, true], [true, true, false]];

pub const MAX_BRUTE_CSP_VARS: usize = 16;

/// Binary CSP with domain size 3; `relations[e]` constrains the endpoints of
/// `graph.edges()[e]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCsp {
    pub graph: Graph,
    pub relations: Vec<Relation>,
}

#[derive(Serialize, Deserialize)]
struct CspWire {
    n: usize,
    constraints: Vec<ConstraintWire>,
}

#[derive(Serialize, Deserialize)]
struct ConstraintWire {
    edge: [usize; 2],
    allowed: Vec<[u8; 2]>,
}

impl BinaryCsp {
    pub fn new(graph: Graph, relations: Vec<Relation>) -> Result<Self> {
        if relations.len() != graph.m() {
            return invalid(format!("{} relations for {} edges", relations.len(), graph.m()));
        }
        Ok(BinaryCsp { graph, relations })
    }

    pub fn unconstrained(graph: Graph) -> Self {
        let relations = vec![FULL; graph.m()];
        BinaryCsp { graph, relations }
    }

    pub fn satisfied_by(&self, assignment: &[u8]) -> bool {
        assignment.len() == self.graph.n()
            && assignment.iter().all(|&v| v < 3)
            && self
                .graph
                .edges()
                .iter()
                .zip(&self.relations)
                .all(|(&(u, v), r)| r[assignment[u] as usize][assignment[v] as usize])
    }

    /// Constrained edges only; edges with the full relation are implied.
    pub fn to_json(&self) -> serde_json::Value {
        let constraints = self
            .graph
            .edges()
            .iter()
            .zip(&self.relations)
            .filter(|(_, r)| **r != FULL)
            .map(|(&(u, v), r)| ConstraintWire {
                edge: [u, v],
                allowed: (0..3u8)
                    .flat_map(|p| (0..3u8).map(move |q| (p, q)))
                    .filter(|&(p, q)| r[p as usize][q as usize])
                    .map(|(p, q)| [p + 1, q + 1])
                    .collect(),
            })
            .collect();
        serde_json::to_value(CspWire { n: self.graph.n(), constraints }).expect("csp serializes")
    }

    /// Reads constraints over `graph`; unlisted edges get the full relation.
    pub fn from_json(graph: Graph, value: &serde_json::Value) -> Result<Self> {
        let wire: CspWire = serde_json::from_value(value.clone())?;
        if wire.n != graph.n() {
            return invalid(format!("csp has {} variables, graph has {} vertices", wire.n, graph.n()));
        }
        let mut relations = vec![FULL; graph.m()];
        for c in wire.constraints {
            let [a, b] = c.edge;
            let Some(e) = graph.edge_index(a.min(b), a.max(b)) else {
                return invalid(format!("constraint on non-edge ({a},{b})"));
            };
            let mut r = [[false; 3]; 3];
            for [p, q] in c.allowed {
                if !(1..=3).contains(&p) || !(1..=3).contains(&q) {
                    return invalid(format!("value pair ({p},{q}) outside 1..=3"));
                }
                let (p, q) = if a <= b { (p, q) } else { (q, p) };
                r[p as usize - 1][q as usize - 1] = true;
            }
            relations[e] = r;
        }
        Ok(BinaryCsp { graph, relations })
    }
}

/// Equality inside branch sets, inequality between branch sets of adjacent
/// pattern vertices, no constraint elsewhere. Satisfiable iff `h3` is
/// 3-colorable.
pub fn csp_from_coloring(h3: &Graph, host: &Graph, model: &InducedMinorModel) -> Result<BinaryCsp> {
    if !verify_minor_model(host, h3, model)? {
        return invalid("not a minor model of the pattern");
    }
    let mut owner = vec![None; host.n()];
    for (p, set) in model.branch_sets.iter().enumerate() {
        for &v in set {
            owner[v] = Some(p);
        }
    }
    let relations = host
        .edges()
        .iter()
        .map(|&(u, v)| match (owner[u], owner[v]) {
            (Some(p), Some(q)) if p == q => EQUAL,
            (Some(p), Some(q)) if h3.has_edge(p, q) => UNEQUAL,
            _ => FULL,
        })
        .collect();
    BinaryCsp::new(host.clone(), relations)
}

/// Depth-first search over variables in id order, checking each constraint
/// once both endpoints are set. Returns the first satisfying assignment in
/// lexicographic order.
pub fn solve_csp_brute(csp: &BinaryCsp) -> Result<Option<Vec<u8>>> {
    let n = csp.graph.n();
    if n > MAX_BRUTE_CSP_VARS {
        return invalid(format!("{n} variables exceed the cap {MAX_BRUTE_CSP_VARS}"));
    }
    // constraints checked when their upper endpoint is assigned
    let mut back: Vec<Vec<(usize, &Relation)>> = vec![Vec::new(); n];
    for (&(u, v), r) in csp.graph.edges().iter().zip(&csp.relations) {
        back[v].push((u, r));
    }
    fn go(i: usize, back: &[Vec<(usize, &Relation)>], a: &mut Vec<u8>) -> bool {
        if i == back.len() {
            return true;
        }
        for x in 0..3u8 {
            if back[i].iter().all(|&(u, r)| r[a[u] as usize][x as usize]) {
                a.push(x);
                if go(i + 1, back, a) {
                    return true;
                }
                a.pop();
            }
        }
        false
    }
    let mut a = Vec::with_capacity(n);
    Ok(go(0, &back, &mut a).then_some(a))
}

const GREEDY_ATTEMPTS: u64 = 64;

/// Randomized greedy minor embedding: pattern vertices in breadth-first
/// order take a free host vertex next to a placed neighbor and grow by
/// shortest free paths to the other placed neighbors. `None` after the
/// attempt budget proves nothing.
pub fn greedy_minor_embed(host: &Graph, pattern: &Graph, seed: u64) -> Result<Option<InducedMinorModel>> {
    if pattern.n() > host.n() {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GREEDY_ATTEMPTS {
        if let Some(m) = greedy_attempt(host, pattern, &mut rng) {
            if verify_minor_model(host, pattern, &m)? {
                return Ok(Some(m));
            }
        }
    }
    Ok(None)
}

fn greedy_attempt(host: &Graph, pattern: &Graph, rng: &mut ChaCha8Rng) -> Option<InducedMinorModel> {
    let k = pattern.n();
    let mut starts: Vec<usize> = (0..k).collect();
    starts.shuffle(rng);
    starts.sort_by_key(|&p| usize::MAX - pattern.degree(p));
    let mut order = Vec::with_capacity(k);
    let mut seen = vec![false; k];
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut i = order.len();
        order.push(s);
        while i < order.len() {
            let p = order[i];
            i += 1;
            for &q in pattern.neighbors(p) {
                if !seen[q] {
                    seen[q] = true;
                    order.push(q);
                }
            }
        }
    }

    let mut owner: Vec<Option<usize>> = vec![None; host.n()];
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); k];
    for p in order {
        let placed: Vec<usize> = pattern.neighbors(p).iter().copied().filter(|&q| !sets[q].is_empty()).collect();
        let free: Vec<usize> = match placed.first() {
            None => (0..host.n()).filter(|&v| owner[v].is_none()).collect(),
            Some(&q) => {
                let mut c: Vec<usize> =
                    sets[q].iter().flat_map(|&v| host.neighbors(v)).copied().filter(|&w| owner[w].is_none()).collect();
                c.sort_unstable();
                c.dedup();
                c
            }
        };
        let &root = free.choose(rng)?;
        owner[root] = Some(p);
        sets[p].push(root);
        for &q in placed.iter().skip(1) {
            let touches = |set: &[usize]| set.iter().any(|&v| host.neighbors(v).iter().any(|&w| owner[w] == Some(q)));
            if touches(&sets[p]) {
                continue;
            }
            let path = grow_path(host, &owner, &sets[p], q)?;
            for v in path {
                owner[v] = Some(p);
                sets[p].push(v);
            }
        }
    }
    Some(InducedMinorModel::new(sets))
}

/// Shortest run of free vertices leaving `from` and ending next to a vertex
/// owned by `target`.
fn grow_path(host: &Graph, owner: &[Option<usize>], from: &[usize], target: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; host.n()];
    let mut queue = std::collections::VecDeque::new();
    for &v in from {
        parent[v] = v;
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for &w in host.neighbors(v) {
            if parent[w] != usize::MAX || owner[w].is_some() {
                continue;
            }
            parent[w] = v;
            if host.neighbors(w).iter().any(|&x| owner[x] == Some(target)) {
                let mut path = vec![w];
                let mut at = v;
                while parent[at] != at {
                    path.push(at);
                    at = parent[at];
                }
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// Seeded CSP on `graph` satisfied by a planted assignment: each edge
/// forbids a random subset of the pairs that disagree with the plant.
pub fn planted_csp(graph: &Graph, seed: u64, forbid_prob: f64) -> (BinaryCsp, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plant: Vec<u8> = (0..graph.n()).map(|_| rng.gen_range(0..3)).collect();
    let relations = graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let mut r = FULL;
            for p in 0..3 {
                for q in 0..3 {
                    if (p, q) != (plant[u] as usize, plant[v] as usize) && rng.gen_bool(forbid_prob) {
                        r[p][q] = false;
                    }
                }
            }
            r
        })
        .collect();
    (BinaryCsp { graph: graph.clone(), relations }, plant)
}

/// Seeded CSP with uniformly random relations.
pub fn random_csp(graph: &Graph, seed: u64, forbid_prob: f64) -> BinaryCsp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let relations = graph
        .edges()
        .iter()
        .map(|_| {
            let mut r = FULL;
            for row in r.iter_mut() {
                for cell in row.iter_mut() {
                    *cell = !rng.gen_bool(forbid_prob);
                }
            }
            r
        })
        .collect();
    BinaryCsp { graph: graph.clone(), relations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    fn identity(n: usize) -> InducedMinorModel {
        InducedMinorModel::new((0..n).map(|v| vec![v]).collect())
    }

    #[test]
    fn coloring_csps() {
        let k3 = complete(3);
        assert!(solve_csp_brute(&csp_from_coloring(&k3, &k3, &identity(3)).unwrap()).unwrap().is_some());
        let k4 = complete(4);
        assert!(solve_csp_brute(&csp_from_coloring(&k4, &k4, &identity(4)).unwrap()).unwrap().is_none());
        assert!(csp_from_coloring(&k3, &path(3), &identity(3)).is_err());
    }

    #[test]
    fn contracted_coloring() {
        // C5 as a minor of C6 with one branch set of two vertices
        let m = InducedMinorModel::new(vec![vec![0, 1], vec![2], vec![3], vec![4], vec![5]]);
        let csp = csp_from_coloring(&cycle(5), &cycle(6), &m).unwrap();
        let a = solve_csp_brute(&csp).unwrap().unwrap();
        assert_eq!(a[0], a[1]);
        assert!(csp.satisfied_by(&a));
    }

    #[test]
    fn greedy_embedding() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_gnp(12, 0.3, &mut rng);
        if g.is_connected() {
            assert!(greedy_minor_embed(&g, &path(3), 0).unwrap().is_some());
        }
        assert!(greedy_minor_embed(&grid(3, 3), &path(3), 0).unwrap().is_some());
        let tree = crate::graph::complete_binary_tree(4).unwrap();
        assert!(greedy_minor_embed(&tree, &complete(3), 0).unwrap().is_none());
    }

    #[test]
    fn json_round_trip() {
        let (csp, plant) = planted_csp(&cycle(5), 3, 0.5);
        assert!(csp.satisfied_by(&plant));
        let back = BinaryCsp::from_json(cycle(5), &csp.to_json()).unwrap();
        assert_eq!(back, csp);
    }
}
