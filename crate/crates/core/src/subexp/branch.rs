use crate::error::{invalid, Result};
use crate::graph::Graph;

/// One leaf of the branching: `x = I ∪ U`, `z = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchLeaf {
    pub x: Vec<usize>,
    pub z: Vec<usize>,
    /// Decisions from the root, `o` for "move to O" and `i[..]` for "move to
    /// I" with the spared neighbors listed, joined by `.`.
    pub trace: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchFamily {
    pub leaves: Vec<BranchLeaf>,
    /// Smallest drop of `sum over U of (phi + 1)` seen at an I-move.
    pub min_measure_drop: Option<usize>,
    pub i_moves: usize,
}

const U: u8 = 0;
const I: u8 = 1;
const O: u8 = 2;

struct Brancher<'a> {
    g: &'a Graph,
    delta: usize,
    big_delta: usize,
    out: BranchFamily,
}

/// Subsets of `0..len` with at most `max` elements, in ascending order of
/// their bitmask value.
fn small_subsets(len: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in start..len {
            cur.push(i);
            go(i + 1, len, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, max, &mut Vec::new(), &mut out);
    // descending index lists compare like the masks they encode
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

impl Brancher<'_> {
    fn measure(side: &[u8], phi: &[i64]) -> usize {
        side.iter().zip(phi).filter(|(&s, _)| s == U).map(|(_, &p)| (p + 1) as usize).sum()
    }

    fn run(&mut self, side: &mut Vec<u8>, phi: &mut Vec<i64>, trace: &mut Vec<String>) {
        let g = self.g;
        let pick = (0..g.n())
            .filter(|&v| side[v] == U)
            .map(|v| (g.neighbors(v).iter().filter(|&&w| side[w] == U).count(), v))
            .filter(|&(d, _)| d > self.big_delta)
            .min_by_key(|&(d, v)| (usize::MAX - d, v));
        let Some((_, v)) = pick else {
            let x = (0..g.n()).filter(|&w| side[w] != O).collect();
            let z = (0..g.n()).filter(|&w| side[w] == I).collect();
            self.out.leaves.push(BranchLeaf { x, z, trace: trace.join(".") });
            return;
        };

        side[v] = O;
        trace.push("o".into());
        self.run(side, phi, trace);
        trace.pop();
        side[v] = U;

        let nu: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| side[w] == U).collect();
        for spared in small_subsets(nu.len(), self.delta) {
            let (saved_side, saved_phi) = (side.clone(), phi.clone());
            let before = Self::measure(side, phi);
            side[v] = I;
            for (k, &w) in nu.iter().enumerate() {
                if spared.binary_search(&k).is_err() {
                    phi[w] -= 1;
                    if phi[w] < 0 {
                        side[w] = O;
                    }
                }
            }
            let drop = before - Self::measure(side, phi);
            self.out.i_moves += 1;
            self.out.min_measure_drop = Some(self.out.min_measure_drop.map_or(drop, |d| d.min(drop)));
            let names: Vec<String> = spared.iter().map(|&k| nu[k].to_string()).collect();
            trace.push(format!("i[{}]", names.join(",")));
            self.run(side, phi, trace);
            trace.pop();
            *side = saved_side;
            *phi = saved_phi;
        }
    }
}

/// Enumerates pairs `(X_i, Z_i)` such that every `Y` inducing a
/// `delta`-degenerate subgraph lies inside some `X_i`, `G[X_i \ Z_i]` has
/// maximum degree at most `big_delta`, and
/// `|Z_i| <= (delta + 1) n / (big_delta - delta + 1)`.
pub fn degeneracy_branch(g: &Graph, delta: usize, big_delta: usize) -> Result<BranchFamily> {
    if big_delta < delta {
        return invalid(format!("Delta = {big_delta} is below delta = {delta}"));
    }
    let mut b = Brancher {
        g,
        delta,
        big_delta,
        out: BranchFamily { leaves: Vec::new(), min_measure_drop: None, i_moves: 0 },
    };
    let mut side = vec![U; g.n()];
    let mut phi = vec![delta as i64; g.n()];
    b.run(&mut side, &mut phi, &mut Vec::new());
    Ok(b.out)
}

/// `n^((delta + 1)^2 n / (big_delta - delta + 1))`, the bound on the family size.
pub fn leaf_count_bound(n: usize, delta: usize, big_delta: usize) -> f64 {
    let e = ((delta + 1) * (delta + 1) * n) as f64 / (big_delta - delta + 1) as f64;
    (n as f64).powf(e)
}

/// `(delta + 1) n / (big_delta - delta + 1)`.
pub fn leaf_z_bound(n: usize, delta: usize, big_delta: usize) -> f64 {
    ((delta + 1) * n) as f64 / (big_delta - delta + 1) as f64
}
