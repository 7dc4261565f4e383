//! One PASS/FAIL line per acceptance criterion. Exits nonzero when a
//! criterion outside `EXPECTED_FAILURES` fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use indminor::binshift::{bs_canonical_flow, bs_generate, bs_partition};
use indminor::embed::{almost_embed, dependency_degrees, verify_almost_embedding};
use indminor::flow::{ConcurrentFlow, Separation};
use indminor::graph::generators::{complete, cycle, grid, path, random_gnp};
use indminor::graph::{complete_binary_tree, subdivide, verify_induced_minor_model, verify_tree_decomposition};
use indminor::hardness::{
    build_chain, check_attachment_claims, forward_witness, planted_csp, random_csp, solve_midp_brute, BinaryCsp,
    MIDP_WIDTH_BOUND,
};
use indminor::oracles::{brute_induced_minor, brute_mis};
use indminor::subexp::{degeneracy_branch, induced_minor_test, minimal_model_host, solve_mis, MisConfig};
use indminor::Graph;
use indminor_cli::{cmd_separate, GlobalOpts, Output};

/// Criteria that cannot hold as stated; see the README.
const EXPECTED_FAILURES: &[usize] = &[2];

/// Resample cap for the forced-flow runs; the default cap is quadratic in
/// the event count and makes hopeless large patterns run for minutes.
const FORCED_FLOW_RESAMPLE_CAP: u64 = 5000;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn degeneracy(g: &Graph, vertices: &[usize]) -> usize {
    let mut alive: Vec<usize> = vertices.to_vec();
    let mut best = 0;
    while !alive.is_empty() {
        let deg = |v: usize, alive: &[usize]| alive.iter().filter(|&&w| g.has_edge(v, w)).count();
        let (i, d) = alive.iter().enumerate().map(|(i, &v)| (i, deg(v, &alive))).min_by_key(|&(_, d)| d).unwrap();
        best = best.max(d);
        alive.swap_remove(i);
    }
    best
}

fn max_degree_within(g: &Graph, vertices: &[usize]) -> usize {
    vertices.iter().map(|&v| vertices.iter().filter(|&&w| g.has_edge(v, w)).count()).max().unwrap_or(0)
}

fn independent(g: &Graph, set: &[usize]) -> bool {
    set.iter().all(|&u| set.iter().all(|&v| !g.has_edge(u, v)))
}

fn separate_ok(out: &Output, g: &Graph, h: &Graph) -> (bool, bool) {
    let mut is_model = false;
    let certified = if let Some(m) = out.result.get("model") {
        is_model = true;
        let m = indminor::InducedMinorModel::from_json(m).unwrap();
        verify_induced_minor_model(g, h, &m).unwrap()
    } else {
        let s = Separation::from_json(&out.result["separator"]).unwrap();
        s.is_valid(g) && s.is_balanced(g.n())
    };
    (certified && out.verdicts.values().all(|&v| v), is_model)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut hosts: Vec<(String, Graph)> = Vec::new();
    for (r, c) in [(2, 2), (3, 3), (3, 4), (4, 4), (2, 10), (5, 5), (6, 6), (8, 8), (10, 10), (12, 12)] {
        hosts.push((format!("grid{r}x{c}"), grid(r, c)));
    }
    for n in [6, 8, 9, 10, 15, 20, 30, 45, 60] {
        for p in [0.1, 0.5] {
            hosts.push((format!("gnp({n},{p})"), random_gnp(n, p, &mut rng)));
        }
    }
    for n in [3, 5, 8, 10, 20, 30] {
        hosts.push((format!("K{n}"), complete(n)));
    }
    for b in 2..=8 {
        hosts.push((format!("bs{b}"), bs_generate(b).unwrap()));
    }
    let patterns = [
        complete(3),
        cycle(4),
        complete(5),
        subdivide(&complete(4), 1).unwrap().graph,
        complete_binary_tree(3).unwrap(),
    ];
    let mut pairs = 0;
    let mut failures = Vec::new();
    let (mut models, mut small_checked, mut false_models) = (0, 0, 0);
    for (i, (name, g)) in hosts.iter().enumerate() {
        for (j, h) in patterns.iter().enumerate() {
            // small hosts also run with a congestion target every flow meets,
            // so the embedding path is exercised too
            let gammas: &[Option<f64>] = if g.n() <= 10 { &[None, Some((g.n() * g.n()) as f64)] } else { &[None] };
            for &gamma in gammas {
                let resample_cap = gamma.map(|_| FORCED_FLOW_RESAMPLE_CAP);
                let opts = GlobalOpts { seed: (i * 5 + j) as u64, gamma, resample_cap, ..GlobalOpts::default() };
                pairs += 1;
                let out = match cmd_separate(g, h, &opts) {
                    Ok(out) => out,
                    Err(e) => {
                        failures.push(format!("{name}/{j}: {e}"));
                        continue;
                    }
                };
                let (ok, is_model) = separate_ok(&out, g, h);
                if !ok {
                    failures.push(format!("{name}/{j}: uncertified"));
                }
                models += is_model as usize;
                if g.n() <= 10 {
                    small_checked += 1;
                    if is_model && brute_induced_minor(g, h).unwrap().is_none() {
                        false_models += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = pairs >= 200 && failures.is_empty() && false_models == 0 && elapsed < Duration::from_secs(600);
    verdict(
        pass,
        format!(
            "{pairs} pairs, {} uncertified {:?}, {models} models, {small_checked} small pairs cross-checked with {false_models} spurious models, {:.1}s",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Verdict {
    let c6 = cycle(6);
    let ddot = subdivide(&c6, 2).unwrap().graph;
    // variables of an event are its four endpoints; dependent events share one
    let edges = ddot.edges();
    let events: Vec<[usize; 4]> = (0..edges.len())
        .flat_map(|e| (e + 1..edges.len()).map(move |f| (e, f)))
        .map(|(e, f)| [edges[e].0, edges[e].1, edges[f].0, edges[f].1])
        .filter(|v| v[0] != v[2] && v[0] != v[3] && v[1] != v[2] && v[1] != v[3])
        .collect();
    let counted: Vec<usize> = events
        .iter()
        .enumerate()
        .map(|(i, a)| events.iter().enumerate().filter(|&(j, b)| j != i && a.iter().any(|x| b.contains(x))).count())
        .collect();
    let dep_bound = 12 * ddot.m();
    let deps_ok = counted.iter().all(|&d| d <= dep_bound) && dependency_degrees(&ddot) == counted;

    // the bound |V|^2 / (15 sqrt|E(H)| sqrt|E(G)|) against the congestion of
    // K_N, which is at least 2N - 1 for any flow
    let bound = |n: usize| (n * n) as f64 / (15.0 * (c6.m() as f64).sqrt() * ((n * (n - 1) / 2) as f64).sqrt());
    let mut measured_ok = true;
    for n in [2, 5, 10, 20, 30] {
        let f = ConcurrentFlow::shortest_paths(&complete(n)).unwrap();
        measured_ok &= f.congestion() == (2 * n - 1) as f64;
    }
    let host = (2..=1_000_000).find(|&n| (2 * n - 1) as f64 <= bound(n));

    let n = host.unwrap_or(30);
    let g = complete(n);
    let flow = ConcurrentFlow::shortest_paths(&g).unwrap();
    let mut successes = 0;
    for seed in 0..20 {
        if let Ok(r) = almost_embed(&g, &c6, &flow, seed, None) {
            successes += verify_almost_embedding(&g, &c6, &r.embedding).unwrap() as usize;
        }
    }
    let pass = host.is_some() && successes >= 18 && deps_ok;
    verdict(
        pass,
        format!(
            "no complete host up to 10^6 meets the congestion bound (K_N needs 2N-1, bound tends to {:.4} N; K_30 congestion check {measured_ok}); \
             on K_{n} almost_embed succeeded {successes}/20; dependency degrees max {} <= {dep_bound}: {deps_ok}",
            (2f64).sqrt() / (30.0 * 6f64.sqrt()),
            counted.iter().max().unwrap()
        ),
    )
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=18);
        let p = rng.gen_range(0.05..0.7);
        let g = random_gnp(n, p, &mut rng);
        let r = solve_mis(&g, &complete(5), &MisConfig::default()).unwrap();
        if !independent(&g, &r.set) || r.set.len() != brute_mis(&g).unwrap().len() {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        mismatches == 0 && elapsed < Duration::from_secs(120),
        format!("100 graphs, {mismatches} mismatches, {:.1}s", elapsed.as_secs_f64()),
    )
}

#[derive(Deserialize)]
struct AtlasGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

fn criterion_4() -> Verdict {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/connected_atlas7.json")).unwrap();
    let atlas: Vec<AtlasGraph> = serde_json::from_str(&text).unwrap();
    let (mut bad_cover, mut bad_leaf, mut bad_count, mut families) = (0, 0, 0, 0);
    for a in &atlas {
        let g = Graph::from_edges(a.n, a.edges.iter().map(|&[u, v]| (u, v))).unwrap();
        let n = g.n();
        for (delta, big) in [(0usize, 2usize), (1, 3)] {
            families += 1;
            let f = degeneracy_branch(&g, delta, big).unwrap();
            let count_bound = (n as f64).powf(((delta + 1) * (delta + 1) * n) as f64 / (big - delta + 1) as f64);
            if f.leaves.len() as f64 > count_bound {
                bad_count += 1;
            }
            let z_bound = ((delta + 1) * n) as f64 / (big - delta + 1) as f64;
            for leaf in &f.leaves {
                let rest: Vec<usize> = leaf.x.iter().copied().filter(|v| !leaf.z.contains(v)).collect();
                if leaf.z.len() as f64 > z_bound || max_degree_within(&g, &rest) > big || !leaf.z.iter().all(|v| leaf.x.contains(v)) {
                    bad_leaf += 1;
                }
            }
            for mask in 0u32..1 << n {
                let y: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                if degeneracy(&g, &y) <= delta && !f.leaves.iter().any(|l| y.iter().all(|v| l.x.contains(v))) {
                    bad_cover += 1;
                }
            }
        }
    }
    verdict(
        bad_cover + bad_leaf + bad_count == 0 && atlas.len() == 996,
        format!(
            "{} connected graphs, {families} families: {bad_cover} uncovered sets, {bad_leaf} bad leaves, {bad_count} oversized families",
            atlas.len()
        ),
    )
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut hosts, mut violations, mut not_minimal, mut worst) = (0, 0, 0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(3..=9);
        let p = rng.gen_range(0.2..0.9);
        let g = random_gnp(n, p, &mut rng);
        for h in [path(3), cycle(4)] {
            let Some((host, _)) = minimal_model_host(&g, &h).unwrap() else { continue };
            hosts += 1;
            let d = degeneracy(&host, &(0..host.n()).collect::<Vec<_>>());
            worst = worst.max(d);
            if d > 3 * h.n() {
                violations += 1;
            }
            let minimal = (0..host.n()).all(|v| {
                let keep: Vec<usize> = (0..host.n()).filter(|&w| w != v).collect();
                brute_induced_minor(&host.induced_subgraph(&keep).0, &h).unwrap().is_none()
            });
            not_minimal += !minimal as usize;
        }
    }
    verdict(
        violations == 0 && not_minimal == 0 && hosts > 0,
        format!("200 graphs, {hosts} minimal hosts, max degeneracy {worst}, {violations} over 3|V(H)|, {not_minimal} not minimal"),
    )
}

fn criterion_6() -> Verdict {
    let mut problems = Vec::new();
    let mut worst_width = 0;
    for b in 2..=10u32 {
        let g = bs_generate(b).unwrap();
        let part = bs_partition(b).unwrap();
        let mut all: Vec<(usize, usize)> = part.parts.iter().flatten().copied().collect();
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        if total != g.m() || all != g.edges() {
            problems.push(format!("b={b} not a partition"));
        }
        for i in 0..4 {
            let td = &part.certificates[i];
            worst_width = worst_width.max(td.width());
            if !verify_tree_decomposition(&part.part_graph(i), td).unwrap() || td.width() > 16 {
                problems.push(format!("b={b} certificate {i}"));
            }
        }
        let flow = bs_canonical_flow(b).unwrap();
        if flow.congestion() > ((b as usize + 1) << b) as f64 {
            problems.push(format!("b={b} congestion {}", flow.congestion()));
        }
    }
    let c1 = bs_canonical_flow(1).unwrap().congestion();
    verdict(
        problems.is_empty() && c1 == 3.0,
        format!("b=2..10: max certificate width {worst_width}, problems {problems:?}; b=1 congestion {c1}"),
    )
}

fn exhaustive_satisfiable(csp: &BinaryCsp) -> bool {
    let n = csp.graph.n();
    (0..3usize.pow(n as u32)).any(|mut code| {
        let x: Vec<u8> = (0..n)
            .map(|_| {
                let d = (code % 3) as u8;
                code /= 3;
                d
            })
            .collect();
        csp.satisfied_by(&x)
    })
}

fn criterion_7() -> Verdict {
    let mut problems = Vec::new();
    let mut max_width = 0;
    for i in 0..50u64 {
        let b = if i < 25 { 2 } else { 3 };
        let (csp, plant) = planted_csp(&bs_generate(b).unwrap(), 700 + i, 0.5);
        let chain = build_chain(&csp, 1 + (i % 3) as u32).unwrap();
        if !chain.midp.instance.structure_ok() {
            problems.push(format!("csp {i}: structure"));
        }
        for (ok, w) in chain.midp.certificate_verdicts().unwrap() {
            max_width = max_width.max(w);
            if !ok || w > MIDP_WIDTH_BOUND {
                problems.push(format!("csp {i}: certificate width {w} ok {ok}"));
            }
        }
        let (_, v) = forward_witness(&chain, &plant).unwrap();
        if !v.all() {
            problems.push(format!("csp {i}: witness {v:?}"));
        }
    }
    let g2 = bs_generate(2).unwrap();
    let mut unsat = 0;
    let mut seed = 0;
    while unsat < 10 {
        seed += 1;
        let csp = random_csp(&g2, seed, 0.7);
        if exhaustive_satisfiable(&csp) {
            continue;
        }
        unsat += 1;
        let chain = build_chain(&csp, 1).unwrap();
        if solve_midp_brute(&chain.midp.instance).is_some() {
            problems.push(format!("unsat seed {seed}: midp solved"));
        }
    }
    // hosts of at most 12 vertices leave room for the attached B_3 (h = 1)
    // on a base of up to 6 vertices; B_{h+1} = P3-free bases are clique unions
    let mut claims = 0;
    let mut models = 0;
    for h in 1..=3u32 {
        let attached = (1usize << (h + 2)) - 2;
        for n0 in 1..=12usize.saturating_sub(attached) {
            for parts in partitions(n0) {
                let mut edges = Vec::new();
                let mut start = 0;
                for &k in &parts {
                    for u in start..start + k {
                        edges.extend((u + 1..start + k).map(|v| (u, v)));
                    }
                    start += k;
                }
                let g0 = Graph::from_edges(n0, edges).unwrap();
                for v in 0..n0 {
                    let c = check_attachment_claims(&g0, v, h, 12).unwrap();
                    claims += 1;
                    models += c.models;
                    if !(c.precondition && c.root_holds_anchor && c.copies_forced && c.models > 0) {
                        problems.push(format!("attachment h={h} parts {parts:?} v={v}"));
                    }
                }
            }
        }
    }
    verdict(
        problems.is_empty() && claims > 0,
        format!(
            "50 planted csps, max certificate width {max_width}; 10 unsatisfiable csps; {claims} anchored hosts, {models} models enumerated; problems {:?}",
            problems.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

/// Integer partitions of `n` in non-increasing parts.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let patterns = [cycle(4), path(4), subdivide(&complete(3), 1).unwrap().graph];
    let (mut present, mut mismatches) = (0, 0);
    for i in 0..100 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.1..0.8);
        let g = random_gnp(n, p, &mut rng);
        let h = &patterns[i % 3];
        let got = induced_minor_test(&g, h).unwrap().model;
        let want = brute_induced_minor(&g, h).unwrap().is_some();
        present += want as usize;
        let verified = got.as_ref().map_or(true, |m| verify_induced_minor_model(&g, h, m).unwrap());
        if got.is_some() != want || !verified {
            mismatches += 1;
        }
    }
    verdict(mismatches == 0, format!("100 pairs ({present} containing the pattern), {mismatches} disagreements"))
}

fn main() {
    let criteria: [(usize, fn() -> Verdict); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    for (id, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let v = run();
        println!("criterion {id}: {} ({})", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if v.pass == EXPECTED_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
