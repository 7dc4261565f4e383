use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use indminor::binshift::{bs_canonical_flow, bs_generate, bs_partition, MAX_FLOW_B};
use indminor::embed::{find_separator_or_model, SeparatorOrModel};
use indminor::flow::{ConcurrentFlow, Separation};
use indminor::graph::generators::{complete, grid, path, random_gnp};
use indminor::graph::{complete_binary_tree, verify_induced_minor_model, verify_tree_decomposition, TreeDecomposition};
use indminor::hardness::{
    build_chain, forward_witness, solve_csp_brute, verify_anchored_model, verify_midp_solution, AnchoredInstance,
    BinaryCsp, MidpInstance, MAX_BRUTE_CSP_VARS, MIDP_WIDTH_BOUND,
};
use indminor::oracles::{
    brute_min_balanced_separator, brute_mis_capped, brute_pathwidth_capped, search_induced_minor, MinorSearch,
    DEFAULT_MINOR_CAP, DEFAULT_MIS_CAP, DEFAULT_PATHWIDTH_CAP,
};
use indminor::subexp::{induced_minor_test, solve_mis, MisConfig};
use indminor::{Graph, InducedMinorModel};

use crate::specs::{load_graph, read_json};
use crate::{execute, CliError, CliResult, GlobalOpts, Output, RunManifest};

fn verdicts<const N: usize>(items: [(&str, bool); N]) -> BTreeMap<String, bool> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Invalid(msg.into()))
}

/// DOT with per-vertex attributes.
fn dot_with(g: &Graph, name: &str, attr: impl Fn(usize) -> Option<String>) -> String {
    let mut out = format!("graph {name} {{\n");
    for v in 0..g.n() {
        match attr(v) {
            Some(a) => writeln!(out, "  {v} [{a}];"),
            None => writeln!(out, "  {v};"),
        }
        .expect("write to string");
    }
    for &(u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").expect("write to string");
    }
    out.push_str("}\n");
    out
}

fn model_dot(g: &Graph, model: &InducedMinorModel) -> String {
    let mut owner = vec![None; g.n()];
    for (x, set) in model.branch_sets.iter().enumerate() {
        for &v in set {
            owner[v] = Some(x);
        }
    }
    dot_with(g, "model", |v| owner[v].map(|x| format!("label=\"{v}:{x}\", style=filled, fillcolor=lightblue")))
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Grid,
    Random,
    Complete,
    Path,
    Bs,
    Btree,
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Vertex count for random, complete and path.
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability for random.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub b: Option<u32>,
    /// Height for btree.
    #[arg(long)]
    pub height: Option<usize>,
}

pub fn cmd_gen(a: &GenArgs, global: &GlobalOpts) -> CliResult<Output> {
    fn need<T: Copy>(v: Option<T>, flag: &str) -> CliResult<T> {
        v.ok_or_else(|| CliError::Invalid(format!("--{flag} is required")))
    }
    let g = match a.kind {
        GenKind::Grid => grid(need(a.rows, "rows")?, need(a.cols, "cols")?),
        GenKind::Random => {
            let p = need(a.p, "p")?;
            if !(0.0..=1.0).contains(&p) {
                return invalid(format!("probability {p} outside [0, 1]"));
            }
            random_gnp(need(a.n, "n")?, p, &mut ChaCha8Rng::seed_from_u64(global.seed))
        }
        GenKind::Complete => complete(need(a.n, "n")?),
        GenKind::Path => path(need(a.n, "n")?),
        GenKind::Bs => bs_generate(need(a.b, "b")?)?,
        GenKind::Btree => complete_binary_tree(need(a.height, "height")?)?,
    };
    Ok(Output {
        parameters: json!({ "kind": format!("{:?}", a.kind).to_lowercase(), "rows": a.rows, "cols": a.cols,
            "n": a.n, "p": a.p, "b": a.b, "height": a.height }),
        measured: json!({ "n": g.n(), "m": g.m() }),
        dot: Some(g.to_dot("G")),
        result: g.to_json(),
        ..Output::default()
    })
}

#[derive(Args, Debug, Clone)]
pub struct SeparateArgs {
    /// Graph JSON file or named graph.
    #[arg(long)]
    pub graph: String,
    /// Pattern JSON file or named graph.
    #[arg(long)]
    pub pattern: String,
}

fn load_pair(graph: &str, pattern: &str) -> CliResult<(Graph, Graph, Vec<PathBuf>)> {
    let (g, gp) = load_graph(graph)?;
    let (h, hp) = load_graph(pattern)?;
    Ok((g, h, gp.into_iter().chain(hp).collect()))
}

pub(crate) fn separate_files(a: &SeparateArgs, global: &GlobalOpts) -> CliResult<Output> {
    let (g, h, inputs) = load_pair(&a.graph, &a.pattern)?;
    let mut out = cmd_separate(&g, &h, global)?;
    out.parameters = json!({ "graph": a.graph, "pattern": a.pattern });
    out.inputs = inputs;
    Ok(out)
}

/// Balanced separator or model of `h`, re-verified here.
pub fn cmd_separate(g: &Graph, h: &Graph, global: &GlobalOpts) -> CliResult<Output> {
    let report = find_separator_or_model(g, h, &global.separator_config())?;
    let measured = json!({
        "n": g.n(), "m": g.m(), "gamma": report.gamma, "cuts": report.cuts, "c_cut": report.c_cut,
        "c_sep": report.c_sep, "c_size": report.c_size, "resamples": report.resamples,
        "embed_attempts": report.embed_attempts, "anomaly": report.anomaly,
    });
    Ok(match &report.outcome {
        SeparatorOrModel::Separator(sep) => {
            let side = |v: usize| {
                let color = if sep.s.contains(&v) { "red" } else if sep.a.contains(&v) { "lightblue" } else { "palegreen" };
                Some(format!("style=filled, fillcolor={color}"))
            };
            Output {
                result: json!({ "separator": sep.to_json(), "size": sep.s.len() }),
                verdicts: verdicts([("separation", sep.is_valid(g)), ("balanced", sep.is_balanced(g.n()))]),
                measured,
                dot: Some(dot_with(g, "separation", side)),
                ..Output::default()
            }
        }
        SeparatorOrModel::Model(m) => Output {
            result: json!({ "model": m.to_json() }),
            verdicts: verdicts([("model", verify_induced_minor_model(g, h, m)?)]),
            measured,
            dot: Some(model_dot(g, m)),
            ..Output::default()
        },
    })
}

#[derive(Args, Debug, Clone)]
pub struct MisArgs {
    #[arg(long)]
    pub graph: String,
    /// Excluded induced minor guiding the separators.
    #[arg(long, default_value = "K5")]
    pub pattern: String,
}

pub(crate) fn mis_files(a: &MisArgs, global: &GlobalOpts) -> CliResult<Output> {
    let (g, h, inputs) = load_pair(&a.graph, &a.pattern)?;
    let mut out = cmd_mis(&g, &h, global)?;
    out.parameters = json!({ "graph": a.graph, "pattern": a.pattern });
    out.inputs = inputs;
    Ok(out)
}

pub fn cmd_mis(g: &Graph, h: &Graph, global: &GlobalOpts) -> CliResult<Output> {
    let cfg = MisConfig { separator: global.separator_config(), leaf_size: global.leaf_size };
    let r = solve_mis(g, h, &cfg)?;
    let independent = r.set.iter().all(|&u| r.set.iter().all(|&v| !g.has_edge(u, v)));
    let mut verdict = vec![("independent", independent)];
    if let Some(m) = &r.model {
        verdict.push(("model", verify_induced_minor_model(g, h, m)?));
    }
    let in_set = |v: usize| r.set.binary_search(&v).is_ok().then(|| "style=filled, fillcolor=gold".to_string());
    Ok(Output {
        result: json!({
            "set": r.set, "size": r.set.len(), "model": r.model.as_ref().map(InducedMinorModel::to_json),
            "stats": { "leaves": r.leaves, "max_width": r.max_width, "fallback_leaves": r.fallback_leaves },
        }),
        measured: json!({ "size": r.set.len(), "leaves": r.leaves, "max_width": r.max_width }),
        verdicts: verdict.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        dot: Some(dot_with(g, "mis", in_set)),
        ..Output::default()
    })
}

#[derive(Args, Debug, Clone)]
pub struct ImtestArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub pattern: String,
}

pub(crate) fn imtest_files(a: &ImtestArgs, global: &GlobalOpts) -> CliResult<Output> {
    let (g, h, inputs) = load_pair(&a.graph, &a.pattern)?;
    let mut out = cmd_imtest(&g, &h, global)?;
    out.parameters = json!({ "graph": a.graph, "pattern": a.pattern });
    out.inputs = inputs;
    Ok(out)
}

pub fn cmd_imtest(g: &Graph, h: &Graph, _global: &GlobalOpts) -> CliResult<Output> {
    let t = induced_minor_test(g, h)?;
    let mut out = Output {
        result: json!({ "model": t.model.as_ref().map(InducedMinorModel::to_json), "stats": { "leaves": t.leaves } }),
        measured: json!({ "found": t.model.is_some(), "leaves": t.leaves }),
        dot: Some(g.to_dot("G")),
        ..Output::default()
    };
    if let Some(m) = &t.model {
        out.verdicts = verdicts([("model", verify_induced_minor_model(g, h, m)?)]);
        out.dot = Some(model_dot(g, m));
    }
    Ok(out)
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Midp,
    Anchored,
    Imt,
}

#[derive(Args, Debug, Clone)]
pub struct ReduceArgs {
    /// CSP JSON over the binary shift graph on its `n` variables.
    #[arg(long)]
    pub from: PathBuf,
    #[arg(long, value_enum, default_value_t = Stage::Imt)]
    pub stage: Stage,
    /// Attachment height parameter.
    #[arg(long, default_value_t = 2)]
    pub h: u32,
    /// Largest host materialized for the final stage.
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
}

pub fn cmd_reduce(a: &ReduceArgs, _global: &GlobalOpts) -> CliResult<Output> {
    let value = read_json(&a.from)?;
    let n = value.get("n").and_then(Value::as_u64).ok_or_else(|| CliError::Invalid("csp needs \"n\"".into()))? as usize;
    if n < 4 || !n.is_power_of_two() {
        return invalid(format!("{n} variables is not a binary shift graph size"));
    }
    let csp = BinaryCsp::from_json(bs_generate(n.trailing_zeros())?, &value)?;
    let chain = build_chain(&csp, a.h)?;
    let mut verdict = BTreeMap::new();
    verdict.insert("midp_structure".to_string(), chain.midp.instance.structure_ok());
    let mut widths = Vec::new();
    for (i, (ok, w)) in chain.midp.certificate_verdicts()?.into_iter().enumerate() {
        verdict.insert(format!("certificate_{i}"), ok && w <= MIDP_WIDTH_BOUND);
        widths.push(w);
    }
    let assignment = if n <= MAX_BRUTE_CSP_VARS { solve_csp_brute(&csp)? } else { None };
    let witness = match &assignment {
        Some(x) => {
            let (w, v) = forward_witness(&chain, x)?;
            verdict.insert("midp_witness".into(), v.midp);
            verdict.insert("anchored_witness".into(), v.anchored);
            verdict.insert("imt_witness".into(), v.imt);
            Some(w)
        }
        None => None,
    };
    let satisfiable = if n <= MAX_BRUTE_CSP_VARS { json!(assignment.is_some()) } else { Value::Null };
    let result = match a.stage {
        Stage::Midp => json!({
            "instance": chain.midp.instance.to_json(),
            "paths": witness.as_ref().map(|w| &w.paths),
        }),
        Stage::Anchored => json!({
            "instance": chain.anchored.instance.to_json(),
            "model": witness.as_ref().map(|w| w.anchored_model.to_json()),
        }),
        Stage::Imt => {
            let materialized = match chain.imt.materialize(a.budget) {
                Ok(mat) => {
                    let model = witness.as_ref().map(|w| chain.imt.expand_model(&mat, &w.imt_model));
                    if let Some(m) = &model {
                        verdict.insert("imt_materialized".into(), verify_induced_minor_model(&mat.graph, &mat.tree, m)?);
                    }
                    json!({ "graph": mat.graph.to_json(), "tree": mat.tree.to_json(),
                        "model": model.as_ref().map(InducedMinorModel::to_json) })
                }
                Err(_) => Value::Null,
            };
            json!({
                "base": chain.imt.base.to_json(),
                "compressed": chain.imt.manifest(),
                "model": witness.as_ref().map(|w| w.imt_model.to_json()),
                "materialized": materialized,
            })
        }
    };
    Ok(Output {
        result,
        parameters: json!({ "from": a.from, "stage": format!("{:?}", a.stage).to_lowercase(), "h": a.h, "budget": a.budget }),
        measured: json!({
            "variables": n, "satisfiable": satisfiable, "certificate_widths": widths,
            "midp_vertices": chain.midp.instance.graph.n(), "anchored_vertices": chain.anchored.instance.graph.n(),
            "paths": chain.anchored.k, "imt": chain.imt.manifest(),
        }),
        verdicts: verdict,
        inputs: vec![a.from.clone()],
        dot: None,
    })
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertKind {
    Model,
    Separation,
    Decomposition,
    Flow,
    Midp,
    Anchored,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub kind: CertKind,
    /// Certificate JSON.
    #[arg(long)]
    pub cert: PathBuf,
    /// Host graph (model, separation, decomposition, flow).
    #[arg(long)]
    pub graph: Option<String>,
    /// Pattern graph (model).
    #[arg(long)]
    pub pattern: Option<String>,
    /// Instance JSON (midp, anchored).
    #[arg(long)]
    pub instance: Option<PathBuf>,
}

pub fn cmd_verify(a: &VerifyArgs, _global: &GlobalOpts) -> CliResult<Output> {
    let cert = read_json(&a.cert)?;
    let mut inputs = vec![a.cert.clone()];
    let mut graph = |arg: &Option<String>, flag: &str| -> CliResult<Graph> {
        let s = arg.as_deref().ok_or_else(|| CliError::Invalid(format!("--{flag} is required")))?;
        let (g, p) = load_graph(s)?;
        inputs.extend(p);
        Ok(g)
    };
    let (verdict, measured) = match a.kind {
        CertKind::Model => {
            let (g, h) = (graph(&a.graph, "graph")?, graph(&a.pattern, "pattern")?);
            let m = InducedMinorModel::from_json(&cert)?;
            (verdicts([("model", verify_induced_minor_model(&g, &h, &m)?)]), json!({ "branch_sets": m.pattern_size() }))
        }
        CertKind::Separation => {
            let g = graph(&a.graph, "graph")?;
            let s = Separation::from_json(&cert)?;
            (
                verdicts([("separation", s.is_valid(&g)), ("balanced", s.is_balanced(g.n()))]),
                json!({ "size": s.s.len(), "sparsity": s.sparsity() }),
            )
        }
        CertKind::Decomposition => {
            let g = graph(&a.graph, "graph")?;
            let td: TreeDecomposition = serde_json::from_value(cert)?;
            (verdicts([("decomposition", verify_tree_decomposition(&g, &td)?)]), json!({ "width": td.width() }))
        }
        CertKind::Flow => {
            let g = graph(&a.graph, "graph")?;
            match ConcurrentFlow::from_json(&g, &cert) {
                Ok(f) => (verdicts([("flow", true)]), json!({ "congestion": f.congestion(), "paths": f.path_count() })),
                Err(e) => (verdicts([("flow", false)]), json!({ "error": e.to_string() })),
            }
        }
        CertKind::Midp | CertKind::Anchored => {
            let path = a.instance.clone().ok_or_else(|| CliError::Invalid("--instance is required".into()))?;
            let inst = read_json(&path)?;
            inputs.push(path);
            if a.kind == CertKind::Midp {
                let inst = MidpInstance::from_json(&inst)?;
                let paths: Vec<Vec<usize>> = serde_json::from_value(cert)?;
                (
                    verdicts([("structure", inst.structure_ok()), ("paths", verify_midp_solution(&inst, &paths))]),
                    json!({ "k": inst.k() }),
                )
            } else {
                let inst = AnchoredInstance::from_json(&inst)?;
                let m = InducedMinorModel::from_json(&cert)?;
                (verdicts([("anchored_model", verify_anchored_model(&inst, &m)?)]), json!({ "anchors": inst.anchors.len() }))
            }
        }
    };
    Ok(Output {
        result: json!({ "verdicts": verdict }),
        parameters: json!({ "kind": format!("{:?}", a.kind).to_lowercase(), "cert": a.cert,
            "graph": a.graph, "pattern": a.pattern, "instance": a.instance }),
        measured,
        verdicts: verdict,
        inputs,
        dot: None,
    })
}

#[derive(Args, Debug, Clone)]
pub struct BsArgs {
    #[arg(long)]
    pub b: u32,
    /// Include the four-part edge partition and its certificates.
    #[arg(long)]
    pub partition: bool,
    /// Include the canonical concurrent flow's congestion.
    #[arg(long)]
    pub flow: bool,
    /// With --flow, also emit every flow path.
    #[arg(long)]
    pub flow_paths: bool,
}

pub fn cmd_bs(a: &BsArgs, _global: &GlobalOpts) -> CliResult<Output> {
    let g = bs_generate(a.b)?;
    let mut result = json!({ "graph": g.to_json() });
    let mut measured = json!({ "n": g.n(), "m": g.m() });
    let mut verdict = BTreeMap::new();
    if a.partition {
        let part = bs_partition(a.b)?;
        let mut all: Vec<(usize, usize)> = part.parts.iter().flatten().copied().collect();
        all.sort_unstable();
        verdict.insert("partition_exact".to_string(), all == g.edges());
        let mut widths = Vec::new();
        for i in 0..4 {
            let td = &part.certificates[i];
            verdict.insert(format!("certificate_{i}"), verify_tree_decomposition(&part.part_graph(i), td)? && td.width() <= 16);
            widths.push(td.width());
        }
        result["partition"] = json!({ "parts": part.parts, "certificates": part.certificates });
        measured["certificate_widths"] = json!(widths);
    }
    if a.flow {
        if a.b > MAX_FLOW_B {
            return invalid(format!("canonical flow supports b <= {MAX_FLOW_B}"));
        }
        let flow = bs_canonical_flow(a.b)?;
        let bound = (a.b as f64 + 1.0) * g.n() as f64;
        verdict.insert("flow_congestion".into(), flow.congestion() <= bound);
        measured["congestion"] = json!(flow.congestion());
        measured["congestion_bound"] = json!(bound);
        result["flow"] = if a.flow_paths { flow.to_json() } else { json!({ "congestion": flow.congestion() }) };
    }
    Ok(Output {
        result,
        parameters: json!({ "b": a.b, "partition": a.partition, "flow": a.flow, "flow_paths": a.flow_paths }),
        measured,
        verdicts: verdict,
        dot: Some(g.to_dot("BS")),
        ..Output::default()
    })
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Minor,
    Mis,
    Separator,
    Pathwidth,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub kind: OracleKind,
    #[arg(long)]
    pub graph: String,
    /// Pattern for the minor oracle.
    #[arg(long)]
    pub pattern: Option<String>,
    /// Vertex cap overriding the oracle's default.
    #[arg(long)]
    pub cap: Option<usize>,
}

pub fn cmd_oracle(a: &OracleArgs, _global: &GlobalOpts) -> CliResult<Output> {
    let (g, gp) = load_graph(&a.graph)?;
    let mut inputs: Vec<PathBuf> = gp.into_iter().collect();
    let mut verdict = BTreeMap::new();
    let result = match a.kind {
        OracleKind::Minor => {
            let spec = a.pattern.as_deref().ok_or_else(|| CliError::Invalid("--pattern is required".into()))?;
            let (h, hp) = load_graph(spec)?;
            inputs.extend(hp);
            let opts = MinorSearch { cap: Some(a.cap.unwrap_or(DEFAULT_MINOR_CAP)), ..MinorSearch::default() };
            let m = search_induced_minor(&g, &h, &opts)?;
            if let Some(m) = &m {
                verdict.insert("model".to_string(), verify_induced_minor_model(&g, &h, m)?);
            }
            json!({ "model": m.as_ref().map(InducedMinorModel::to_json) })
        }
        OracleKind::Mis => {
            let set = brute_mis_capped(&g, a.cap.unwrap_or(DEFAULT_MIS_CAP))?;
            json!({ "set": set, "size": set.len() })
        }
        OracleKind::Separator => {
            if a.cap.is_some() {
                return invalid("the separator oracle has a fixed cap");
            }
            let (size, set) = brute_min_balanced_separator(&g)?;
            json!({ "size": size, "separator": set })
        }
        OracleKind::Pathwidth => json!({ "pathwidth": brute_pathwidth_capped(&g, a.cap.unwrap_or(DEFAULT_PATHWIDTH_CAP))? }),
    };
    Ok(Output {
        measured: result.clone(),
        result,
        parameters: json!({ "kind": format!("{:?}", a.kind).to_lowercase(), "graph": a.graph, "pattern": a.pattern, "cap": a.cap }),
        verdicts: verdict,
        inputs,
        dot: None,
    })
}

#[derive(Args, Debug, Clone)]
pub struct ReplayArgs {
    /// Manifest JSON written by an earlier run.
    #[arg(long)]
    pub manifest: PathBuf,
}

/// Reruns the recorded arguments and compares the result digest, the
/// verdicts, the seed and the constants.
pub fn cmd_replay(a: &ReplayArgs, _global: &GlobalOpts) -> CliResult<Output> {
    let recorded: RunManifest = serde_json::from_value(read_json(&a.manifest)?)?;
    if recorded.command == "replay" {
        return invalid("refusing to replay a replay");
    }
    let inputs_unchanged = recorded.inputs.iter().all(|(p, d)| crate::digest_file(p.as_ref()).is_ok_and(|x| &x == d));
    let rerun = execute(&recorded.argv)?.manifest;
    let identical = rerun.output_sha256 == recorded.output_sha256
        && rerun.verdicts == recorded.verdicts
        && rerun.seed == recorded.seed
        && rerun.constants == recorded.constants
        && rerun.measured == recorded.measured;
    Ok(Output {
        result: json!({ "identical": identical, "inputs_unchanged": inputs_unchanged,
            "recorded": recorded.output_sha256, "replayed": rerun.output_sha256 }),
        parameters: json!({ "manifest": a.manifest }),
        verdicts: verdicts([("identical", identical), ("inputs_unchanged", inputs_unchanged)]),
        inputs: vec![a.manifest.clone()],
        ..Output::default()
    })
}
