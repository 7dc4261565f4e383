use super::{flow_or_sparse_cut, ConcurrentFlow, FlowConfig, FlowOrCut, Separation};
use crate::error::Result;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq)]
pub enum PeelOutcome {
    /// Flow on the induced subgraph `graph = G[vertices]` (local ids).
    Flow { vertices: Vec<usize>, graph: Graph, flow: ConcurrentFlow },
    Separator(Separation),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeelReport {
    pub outcome: PeelOutcome,
    /// Sparse cuts taken (component splits not counted).
    pub cuts: usize,
    /// Largest `sparsity * gamma / log2(n_i)` over the cuts taken.
    pub c_cut: f64,
    /// `|S| * gamma / (log2(n) * n^2)` for a returned separator.
    pub c_sep: f64,
}

/// Peels sparse cuts off the largest side until it has at most `2n/3`
/// vertices, or returns the flow found on the remaining side. A
/// disconnected remainder is split by components first, with an empty
/// separator part.
pub fn balanced_separator_or_flow(g: &Graph, gamma: f64, cfg: &FlowConfig) -> Result<PeelReport> {
    let n = g.n();
    let mut a: Vec<usize> = (0..n).collect();
    let mut s: Vec<usize> = Vec::new();
    let mut b: Vec<usize> = Vec::new();
    let mut cuts = 0;
    let mut c_cut: f64 = 0.0;
    while 3 * a.len() > 2 * n {
        let (sub, map) = g.induced_subgraph(&a);
        let comps = sub.components();
        let (x, y, z) = if comps.len() > 1 {
            let big = comps.iter().enumerate().max_by_key(|(i, c)| (c.len(), usize::MAX - i)).unwrap().0;
            let rest = comps.iter().enumerate().filter(|&(i, _)| i != big).flat_map(|(_, c)| c.iter().copied()).collect();
            (comps[big].clone(), Vec::new(), rest)
        } else {
            match flow_or_sparse_cut(&sub, gamma, cfg)? {
                FlowOrCut::Flow(flow) => {
                    return Ok(PeelReport {
                        outcome: PeelOutcome::Flow { vertices: a, graph: sub, flow },
                        cuts,
                        c_cut,
                        c_sep: 0.0,
                    })
                }
                FlowOrCut::Cut(sep) => {
                    cuts += 1;
                    c_cut = c_cut.max(sep.sparsity() * gamma / log2(sub.n()));
                    (sep.a, sep.s, sep.b)
                }
            }
        };
        let (x, z) = if x.len() >= z.len() { (x, z) } else { (z, x) };
        s.extend(y.iter().map(|&v| map[v]));
        b.extend(z.iter().map(|&v| map[v]));
        a = x.iter().map(|&v| map[v]).collect();
        a.sort_unstable();
    }
    let sep = Separation::new(a, s, b);
    let c_sep = sep.s.len() as f64 * gamma / (log2(n) * (n * n) as f64);
    Ok(PeelReport { outcome: PeelOutcome::Separator(sep), cuts, c_cut, c_sep })
}

fn log2(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    fn run(g: &Graph, gamma: f64) -> PeelReport {
        balanced_separator_or_flow(g, gamma, &FlowConfig::default()).unwrap()
    }

    #[test]
    fn k5_keeps_whole_graph_with_flow() {
        let PeelOutcome::Flow { vertices, flow, .. } = run(&complete(5), 9.0).outcome else { panic!("expected flow") };
        assert_eq!(vertices, vec![0, 1, 2, 3, 4]);
        assert!((flow.congestion() - 9.0).abs() < 1e-9);
    }

    #[test]
    fn path_gets_balanced_separator() {
        let g = path(9);
        let PeelOutcome::Separator(sep) = run(&g, 2.0).outcome else { panic!("expected separator") };
        assert!(sep.is_valid(&g) && sep.is_balanced(9));
    }

    #[test]
    fn two_cliques_split_apart() {
        let k4 = complete(4);
        let mut g = k4.disjoint_union(&k4);
        g = Graph::from_edges(8, g.edges().iter().copied().chain([(3, 4)])).unwrap();
        let PeelOutcome::Separator(sep) = run(&g, 1.0).outcome else { panic!("expected separator") };
        assert!(sep.is_valid(&g) && sep.is_balanced(8));
        assert!(sep.s.len() <= 1);
    }

    #[test]
    fn disconnected_input_is_split_by_components() {
        let g = complete(3).disjoint_union(&complete(3));
        let PeelOutcome::Separator(sep) = run(&g, 1.0).outcome else { panic!("expected separator") };
        assert!(sep.s.is_empty() && sep.is_balanced(6));
    }
}
