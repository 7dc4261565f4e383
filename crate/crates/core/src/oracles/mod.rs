//! Exponential-time ground truth for small graphs.

mod minor;

use crate::error::{invalid, Result};
use crate::graph::Graph;

pub use minor::{
    brute_anchored_induced_minor, brute_induced_minor, enumerate_induced_minor_models, search_induced_minor,
    MinorSearch, DEFAULT_MINOR_CAP,
};

pub const DEFAULT_MIS_CAP: usize = 22;
pub const DEFAULT_SEPARATOR_CAP: usize = 16;
pub const DEFAULT_PATHWIDTH_CAP: usize = 10;

fn check_cap(g: &Graph, cap: usize, what: &str) -> Result<()> {
    if g.n() > cap.min(64) {
        return invalid(format!("{what} oracle: {} vertices exceed cap {cap}", g.n()));
    }
    Ok(())
}

fn masks(g: &Graph) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect()
}

/// Maximum independent set by branching on a maximum-degree vertex.
pub fn brute_mis(g: &Graph) -> Result<Vec<usize>> {
    brute_mis_capped(g, DEFAULT_MIS_CAP)
}

pub fn brute_mis_capped(g: &Graph, cap: usize) -> Result<Vec<usize>> {
    check_cap(g, cap, "independent set")?;
    fn go(adj: &[u64], alive: u64, chosen: u64, best: &mut u64) {
        if chosen.count_ones() + alive.count_ones() <= best.count_ones() {
            return;
        }
        if alive == 0 {
            *best = chosen;
            return;
        }
        let mut pick = alive.trailing_zeros() as usize;
        let mut deg = 0;
        let mut rest = alive;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (adj[v] & alive).count_ones();
            if d > deg {
                deg = d;
                pick = v;
            }
        }
        let bit = 1u64 << pick;
        if deg == 0 {
            go(adj, 0, chosen | alive, best);
            return;
        }
        go(adj, alive & !bit & !adj[pick], chosen | bit, best);
        go(adj, alive & !bit, chosen, best);
    }
    let adj = masks(g);
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut best = 0u64;
    go(&adj, all, 0, &mut best);
    Ok((0..g.n()).filter(|&v| best >> v & 1 == 1).collect())
}

/// Smallest `S` such that every component of `G - S` has at most `2n/3`
/// vertices; returns its size and the first such set in size-then-mask order.
pub fn brute_min_balanced_separator(g: &Graph) -> Result<(usize, Vec<usize>)> {
    check_cap(g, DEFAULT_SEPARATOR_CAP, "balanced separator")?;
    let n = g.n();
    let mut subsets: Vec<u32> = (0..1u32 << n).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    for s in subsets {
        let alive: Vec<bool> = (0..n).map(|v| s >> v & 1 == 0).collect();
        if g.components_within(&alive).iter().all(|c| 3 * c.len() <= 2 * n) {
            return Ok((s.count_ones() as usize, (0..n).filter(|&v| s >> v & 1 == 1).collect()));
        }
    }
    unreachable!("S = V always qualifies")
}

/// Pathwidth as the vertex separation number, by dynamic programming over
/// vertex subsets.
pub fn brute_pathwidth(g: &Graph) -> Result<usize> {
    brute_pathwidth_capped(g, DEFAULT_PATHWIDTH_CAP)
}

pub fn brute_pathwidth_capped(g: &Graph, cap: usize) -> Result<usize> {
    check_cap(g, cap.min(24), "pathwidth")?;
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    let adj = masks(g);
    let full = (1usize << n) - 1;
    let mut best = vec![u8::MAX; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let mut boundary = 0u8;
        let mut rest = s;
        let mut inner = u8::MAX;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[v] as usize & !s & full != 0 {
                boundary += 1;
            }
            inner = inner.min(best[s & !(1 << v)]);
        }
        best[s] = inner.max(boundary);
    }
    Ok(best[full] as usize)
}
