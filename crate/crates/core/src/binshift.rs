//! Binary shift graphs: generation, the four-part edge partition with path
//! decomposition certificates, and the window-based concurrent flow.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{invalid, Result};
use crate::flow::ConcurrentFlow;
use crate::graph::{Graph, TreeDecomposition};

pub const MAX_BS_B: u32 = 20;
pub const MAX_FLOW_B: u32 = 12;

fn check_b(b: u32, lo: u32, hi: u32) -> Result<usize> {
    if b < lo || b > hi {
        return invalid(format!("b = {b} outside [{lo}, {hi}]"));
    }
    Ok(1usize << b)
}

/// `v_x v_y` is an edge iff `x != y` and `x = 2y` or `2y + 1` mod `2^b`
/// (or the same with `x`, `y` swapped).
pub fn bs_generate(b: u32) -> Result<Graph> {
    let n = check_b(b, 1, MAX_BS_B)?;
    let mut edges = BTreeSet::new();
    for y in 0..n {
        for x in [2 * y % n, (2 * y + 1) % n] {
            if x != y {
                edges.insert((x.min(y), x.max(y)));
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftPartition {
    pub b: u32,
    pub parts: [Vec<(usize, usize)>; 4],
    /// Path decomposition of `P ∪ parts[i]`, where `P` is the path
    /// `v_0 v_1 ... v_{2^b - 1}`.
    pub certificates: [TreeDecomposition; 4],
}

impl ShiftPartition {
    /// `P ∪ parts[i]`.
    pub fn part_graph(&self, i: usize) -> Graph {
        let n = 1usize << self.b;
        let mut edges: BTreeSet<(usize, usize)> = (1..n).map(|z| (z - 1, z)).collect();
        edges.extend(self.parts[i].iter().copied());
        Graph::from_edges(n, edges).expect("edges in range")
    }
}

/// Width-5 path decomposition of the spine plus the edges `{y, 2y}`, `y`
/// ranging over the lower-half intervals `[2^i, 2^{i+1} - 1]` with
/// `i % 2 == parity`.
fn half_decomposition(b: u32, parity: u32) -> Vec<Vec<usize>> {
    let mut bags: Vec<Vec<usize>> = vec![vec![0]];
    let push_segment = |bags: &mut Vec<Vec<usize>>, seg: Vec<Vec<usize>>, start: usize| {
        bags.push(vec![start - 1, start]);
        bags.extend(seg);
    };
    let mut i = 0;
    while i < b {
        let lo = 1usize << i;
        if i % 2 == parity && i + 2 <= b {
            // block over intervals i and i + 1
            let hi2 = 1usize << (i + 2);
            let mid = 1usize << (i + 1);
            let seg = (lo..mid)
                .map(|y| {
                    let mut bag = vec![y, y + 1, 2 * y, 2 * y + 1, mid];
                    if 2 * y + 2 < hi2 {
                        bag.push(2 * y + 2);
                    }
                    bag
                })
                .collect();
            push_segment(&mut bags, seg, lo);
            i += 2;
        } else {
            let hi = (1usize << (i + 1)) - 1;
            let seg = if lo == hi { vec![vec![lo]] } else { (lo..hi).map(|z| vec![z, z + 1]).collect() };
            push_segment(&mut bags, seg, lo);
            i += 1;
        }
    }
    bags
}

/// Adds `v_0` and `v_{n/2}` to every bag, then `v_{z+1}` next to every
/// `v_z`, `z < n - 1`.
fn lift(bags: Vec<Vec<usize>>, n: usize) -> Vec<Vec<usize>> {
    bags.into_iter()
        .map(|mut bag| {
            bag.extend([0, n / 2]);
            let shifted: Vec<usize> = bag.iter().filter(|&&z| z + 1 < n).map(|&z| z + 1).collect();
            bag.extend(shifted);
            bag.sort_unstable();
            bag.dedup();
            bag
        })
        .collect()
}

/// Index of `y` among `[1, 1], [2, 3], [4, 7], ...`.
fn interval(y: usize) -> u32 {
    usize::BITS - 1 - y.leading_zeros()
}

/// Part of the generator `y` (edges `{y, 2y}`, `{y, 2y + 1}` mod `n`).
fn part_of(y: usize, n: usize) -> usize {
    if y == 0 || y == n / 2 {
        0
    } else if y < n / 2 {
        (interval(y) % 2) as usize
    } else {
        2 + (interval(n - y) % 2) as usize
    }
}

/// Four-part partition of `E(BS_b)`: lower-half generators split by
/// interval parity, upper-half ones by the mirror `z -> n - z`, each with a
/// certified path decomposition of width at most 16. An edge produced by
/// several generators goes to the first one in `(y, 2y before 2y + 1)` order.
pub fn bs_partition(b: u32) -> Result<ShiftPartition> {
    let n = check_b(b, 2, MAX_BS_B)?;
    let mut parts: [Vec<(usize, usize)>; 4] = Default::default();
    let mut seen = BTreeSet::new();
    for y in 0..n {
        for x in [2 * y % n, (2 * y + 1) % n] {
            let e = (x.min(y), x.max(y));
            if x != y && seen.insert(e) {
                parts[part_of(y, n)].push(e);
            }
        }
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    let mirror = |bags: Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        bags.into_iter().map(|bag| bag.into_iter().map(|z| (n - z) % n).collect()).collect()
    };
    let even = half_decomposition(b, 0);
    let odd = half_decomposition(b, 1);
    let certificates = [
        TreeDecomposition::path(lift(even.clone(), n)),
        TreeDecomposition::path(lift(odd.clone(), n)),
        TreeDecomposition::path(lift(mirror(even), n)),
        TreeDecomposition::path(lift(mirror(odd), n)),
    ];
    Ok(ShiftPartition { b, parts, certificates })
}

/// The `b + 1` length-`b` windows of `bin(x) bin(y)`, first to last.
pub fn windows(b: u32, x: usize, y: usize) -> Vec<usize> {
    let s = (x << b) | y;
    let mask = (1usize << b) - 1;
    (0..=b).map(|j| (s >> (b - j)) & mask).collect()
}

/// One unit path per ordered pair: a breadth-first shortest `v_x`-`v_y`
/// path inside the windows of `bin(x) bin(y)`, smallest-id ties.
pub fn bs_canonical_flow(b: u32) -> Result<ConcurrentFlow> {
    let n = check_b(b, 1, MAX_FLOW_B)?;
    let g = bs_generate(b)?;
    let mut paths = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut nodes = windows(b, x, y);
            nodes.sort_unstable();
            nodes.dedup();
            let mut parent = vec![usize::MAX; nodes.len()];
            let src = nodes.binary_search(&x).unwrap();
            parent[src] = src;
            let mut queue = VecDeque::from([src]);
            while let Some(i) = queue.pop_front() {
                for j in 0..nodes.len() {
                    if parent[j] == usize::MAX && g.has_edge(nodes[i], nodes[j]) {
                        parent[j] = i;
                        queue.push_back(j);
                    }
                }
            }
            let mut at = nodes.binary_search(&y).unwrap();
            let mut path = vec![nodes[at]];
            while at != src {
                at = parent[at];
                path.push(nodes[at]);
            }
            path.reverse();
            paths.push((path, 1.0));
        }
    }
    ConcurrentFlow::from_paths(&g, paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::complete;
    use crate::graph::verify_tree_decomposition;

    #[test]
    fn small_shift_graphs() {
        assert_eq!(bs_generate(1).unwrap(), complete(2));
        assert_eq!(bs_generate(2).unwrap().edges(), &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let g3 = bs_generate(3).unwrap();
        assert!(g3.n() == 8 && g3.max_degree() <= 4);
        assert!(bs_generate(0).is_err() && bs_generate(21).is_err());
    }

    #[test]
    fn windows_of_concatenation() {
        // 101 011 -> 101, 010, 101, 011
        assert_eq!(windows(3, 5, 3), vec![5, 2, 5, 3]);
    }

    #[test]
    fn half_decomposition_width() {
        for b in 2..=8 {
            for parity in 0..2 {
                let bags = half_decomposition(b, parity);
                assert!(bags.iter().all(|bag| bag.len() <= 6));
            }
        }
    }

    #[test]
    fn partition_small_b() {
        for b in 2..=6 {
            let part = bs_partition(b).unwrap();
            let g = bs_generate(b).unwrap();
            let mut all: Vec<_> = part.parts.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, g.edges());
            for i in 0..4 {
                let td = &part.certificates[i];
                assert!(verify_tree_decomposition(&part.part_graph(i), td).unwrap(), "b={b} part {i}");
                assert!(td.width() <= 16);
            }
        }
    }

    #[test]
    fn canonical_flow_congestion() {
        assert_eq!(bs_canonical_flow(1).unwrap().congestion(), 3.0);
        let f = bs_canonical_flow(3).unwrap();
        assert!(f.congestion() <= 32.0);
        assert_eq!(f.path_count(), 64);
    }
}
