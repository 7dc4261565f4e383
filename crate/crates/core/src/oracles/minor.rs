use crate::error::{invalid, Result};
use crate::graph::{Graph, InducedMinorModel};

/// Default host size cap for the exhaustive induced-minor search.
pub const DEFAULT_MINOR_CAP: usize = 12;

/// Constraints and limits for [`search_induced_minor`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinorSearch {
    /// Host size cap; hosts above it (or above 64) are rejected.
    pub cap: Option<usize>,
    /// `(host, pattern)`: the branch set of `pattern` must contain `host`.
    pub anchors: Vec<(usize, usize)>,
    /// `(host, pattern)`: the branch set of `pattern` must avoid `host`.
    pub forbidden: Vec<(usize, usize)>,
}

struct Search<'a> {
    h: &'a Graph,
    adj: Vec<u64>,
    all: u64,
    order: Vec<usize>,
    anchor: Vec<u64>,
    forbid: Vec<u64>,
    /// Pattern vertices that may be taken as single vertices without loss.
    singleton: Vec<bool>,
    sets: Vec<u64>,
    closed: Vec<u64>,
    placed: Vec<bool>,
    used: u64,
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

impl<'a> Search<'a> {
    fn new(g: &Graph, h: &'a Graph, opts: &MinorSearch, wlog_singletons: bool) -> Result<Self> {
        let cap = opts.cap.unwrap_or(DEFAULT_MINOR_CAP).min(64);
        if g.n() > cap {
            return invalid(format!("host has {} vertices, oracle cap is {cap}", g.n()));
        }
        let k = h.n();
        let mut anchor = vec![0u64; k];
        let mut forbid = vec![0u64; k];
        for &(v, p) in &opts.anchors {
            if v >= g.n() || p >= k {
                return invalid(format!("anchor ({v},{p}) out of range"));
            }
            anchor[p] |= 1 << v;
        }
        for &(v, p) in &opts.forbidden {
            if v >= g.n() || p >= k {
                return invalid(format!("forbidden pair ({v},{p}) out of range"));
            }
            forbid[p] |= 1 << v;
        }
        let adj = (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
        let singleton = (0..k).map(|p| wlog_singletons && h.degree(p) <= 1 && anchor[p] == 0).collect();

        // BFS per component, components started from anchored vertices,
        // then highest degree, then smallest id
        let mut starts: Vec<usize> = (0..k).collect();
        starts.sort_by_key(|&p| (anchor[p] == 0, usize::MAX - h.degree(p), p));
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
                for &q in h.neighbors(p) {
                    if !seen[q] {
                        seen[q] = true;
                        order.push(q);
                    }
                }
            }
        }
        let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
        Ok(Search {
            h,
            adj,
            all,
            order,
            anchor,
            forbid,
            singleton,
            sets: vec![0; k],
            closed: vec![0; k],
            placed: vec![false; k],
            used: 0,
        })
    }

    fn nbhd(&self, set: u64) -> u64 {
        bits(set).fold(0, |m, v| m | self.adj[v]) & !set
    }

    /// Host vertices still usable by pattern vertex `p`.
    fn allowed(&self, p: usize) -> u64 {
        let mut a = self.all & !self.used & !self.forbid[p];
        for q in 0..self.h.n() {
            if self.placed[q] && q != p && !self.h.has_edge(p, q) {
                a &= !self.closed[q];
            }
        }
        a
    }

    fn feasible(&self) -> bool {
        let mut union = 0u64;
        let mut left = 0u32;
        for u in 0..self.h.n() {
            if self.placed[u] {
                continue;
            }
            left += 1;
            let a = self.allowed(u);
            if a & self.anchor[u] != self.anchor[u] || a == 0 {
                return false;
            }
            for &q in self.h.neighbors(u) {
                if self.placed[q] && a & self.closed[q] & !self.sets[q] == 0 {
                    return false;
                }
            }
            union |= a;
        }
        union.count_ones() >= left
    }

    fn fits(&self, p: usize, set: u64) -> bool {
        if set & self.anchor[p] != self.anchor[p] {
            return false;
        }
        let touch = self.nbhd(set);
        self.h.neighbors(p).iter().all(|&q| !self.placed[q] || touch & self.sets[q] != 0)
    }

    /// Connected sets `S` with `root ∈ S ⊆ allowed` and `S ∩ banned = ∅`,
    /// each produced once. Stops when `f` returns true.
    fn grow(&self, set: u64, banned: u64, allowed: u64, f: &mut dyn FnMut(u64) -> bool) -> bool {
        let ext = self.nbhd(set) & allowed & !banned;
        if ext == 0 {
            return f(set);
        }
        let v = 1u64 << ext.trailing_zeros();
        self.grow(set | v, banned, allowed, f) || self.grow(set, banned | v, allowed, f)
    }

    /// Candidate branch sets for `p`, each once: a root is drawn from the
    /// anchor, else from the boundary of a placed neighbor, else from all
    /// allowed vertices; earlier roots are banned so no set repeats.
    fn candidates(&self, p: usize, f: &mut dyn FnMut(u64) -> bool) -> bool {
        let allowed = self.allowed(p);
        if allowed & self.anchor[p] != self.anchor[p] {
            return false;
        }
        let pool = if self.anchor[p] != 0 {
            1u64 << self.anchor[p].trailing_zeros()
        } else if let Some(&q) = self.h.neighbors(p).iter().find(|&&q| self.placed[q]) {
            allowed & self.closed[q] & !self.sets[q]
        } else {
            allowed
        };
        let mut earlier = 0u64;
        for r in bits(pool) {
            if allowed & (1 << r) == 0 {
                continue;
            }
            let stop = if self.singleton[p] {
                let set = 1u64 << r;
                self.fits(p, set) && f(set)
            } else {
                self.grow(1 << r, earlier, allowed, &mut |set| self.fits(p, set) && f(set))
            };
            if stop {
                return true;
            }
            earlier |= 1 << r;
        }
        false
    }

    fn run(&mut self, depth: usize, found: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        if depth == self.order.len() {
            return found(&self.sets);
        }
        let p = self.order[depth];
        let mut options = Vec::new();
        self.candidates(p, &mut |set| {
            options.push(set);
            false
        });
        for set in options {
            self.sets[p] = set;
            self.closed[p] = set | self.nbhd(set);
            self.placed[p] = true;
            self.used |= set;
            let stop = self.feasible() && self.run(depth + 1, found);
            self.used &= !set;
            self.placed[p] = false;
            self.sets[p] = 0;
            self.closed[p] = 0;
            if stop {
                return true;
            }
        }
        false
    }
}

fn to_model(sets: &[u64]) -> InducedMinorModel {
    InducedMinorModel::new(sets.iter().map(|&s| bits(s).collect()).collect())
}

/// Exhaustive search for an induced minor model of `h` in `g` respecting
/// the anchors and forbidden pairs. `None` is authoritative.
pub fn search_induced_minor(g: &Graph, h: &Graph, opts: &MinorSearch) -> Result<Option<InducedMinorModel>> {
    let mut s = Search::new(g, h, opts, true)?;
    let mut out = None;
    s.run(0, &mut |sets| {
        out = Some(to_model(sets));
        true
    });
    Ok(out)
}

/// Every induced minor model of `h` in `g` respecting the constraints, up
/// to `limit` models (`None` for all).
pub fn enumerate_induced_minor_models(
    g: &Graph,
    h: &Graph,
    opts: &MinorSearch,
    limit: Option<usize>,
) -> Result<Vec<InducedMinorModel>> {
    let mut s = Search::new(g, h, opts, false)?;
    let mut out = Vec::new();
    s.run(0, &mut |sets| {
        out.push(to_model(sets));
        limit.is_some_and(|l| out.len() >= l)
    });
    Ok(out)
}

/// Exhaustive induced-minor test, host size capped at
/// [`DEFAULT_MINOR_CAP`].
pub fn brute_induced_minor(g: &Graph, h: &Graph) -> Result<Option<InducedMinorModel>> {
    search_induced_minor(g, h, &MinorSearch::default())
}

/// Induced-minor test where `anchors[i] = (host, pattern)` pins a host
/// vertex into a branch set.
pub fn brute_anchored_induced_minor(g: &Graph, t: &Graph, anchors: &[(usize, usize)]) -> Result<Option<InducedMinorModel>> {
    search_induced_minor(g, t, &MinorSearch { anchors: anchors.to_vec(), ..MinorSearch::default() })
}
