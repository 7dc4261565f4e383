use super::embed_induced_minor;
use crate::error::{invalid, Error, Result};
use crate::flow::{balanced_separator_or_flow, FlowConfig, PeelOutcome, Separation};
use crate::graph::{verify_induced_minor_model, Graph, InducedMinorModel};

#[derive(Clone, Debug, PartialEq)]
pub struct SeparatorConfig {
    /// Denominator constant in `gamma = n^2 / (c * sqrt(|V(H)| + |E(H)|) * sqrt(m))`.
    pub gamma_constant: f64,
    /// Replaces the computed gamma when set.
    pub gamma_override: Option<f64>,
    pub flow: FlowConfig,
    pub seed: u64,
    pub resample_cap: Option<u64>,
    /// Fresh-seed attempts at embedding once a flow is found.
    pub embed_retries: u32,
}

impl Default for SeparatorConfig {
    fn default() -> Self {
        SeparatorConfig {
            gamma_constant: 120.0,
            gamma_override: None,
            flow: FlowConfig::default(),
            seed: 0,
            resample_cap: None,
            embed_retries: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeparatorOrModel {
    Separator(Separation),
    Model(InducedMinorModel),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparatorReport {
    pub outcome: SeparatorOrModel,
    /// Gamma actually used (after clamping to at least 1).
    pub gamma: f64,
    pub cuts: usize,
    pub c_cut: f64,
    pub c_sep: f64,
    /// `|S| / (log2(n) * sqrt(|V(H)| + |E(H)|) * sqrt(m))` for a separator.
    pub c_size: f64,
    pub resamples: u64,
    pub embed_attempts: u32,
    /// Set when a flow was found but every embedding attempt failed, so a
    /// separator was produced by forced peeling instead.
    pub anomaly: bool,
}

pub fn separator_gamma(g: &Graph, h: &Graph, constant: f64) -> f64 {
    let n = g.n() as f64;
    n * n / (constant * ((h.n() + h.m()) as f64).sqrt() * (g.m() as f64).sqrt())
}

/// Balanced separator of `g`, or an induced minor model of `h` in `g`.
/// Every returned certificate has been verified.
pub fn find_separator_or_model(g: &Graph, h: &Graph, cfg: &SeparatorConfig) -> Result<SeparatorReport> {
    let n = g.n();
    if n == 0 || h.n() == 0 {
        return invalid("host and pattern must be nonempty");
    }
    let mut report = SeparatorReport {
        outcome: SeparatorOrModel::Separator(Separation::default()),
        gamma: 0.0,
        cuts: 0,
        c_cut: 0.0,
        c_sep: 0.0,
        c_size: 0.0,
        resamples: 0,
        embed_attempts: 0,
        anomaly: false,
    };
    if n == 1 || g.m() == 0 {
        let sep = if n == 1 {
            Separation::new(vec![], vec![0], vec![])
        } else {
            Separation::new((0..n / 2).collect(), vec![], (n / 2..n).collect())
        };
        return finish(g, h, report, SeparatorOrModel::Separator(sep));
    }
    let gamma = cfg.gamma_override.unwrap_or_else(|| separator_gamma(g, h, cfg.gamma_constant)).max(1.0);
    report.gamma = gamma;
    let peel = balanced_separator_or_flow(g, gamma, &cfg.flow)?;
    report.cuts = peel.cuts;
    report.c_cut = peel.c_cut;
    match peel.outcome {
        PeelOutcome::Separator(sep) => {
            report.c_sep = peel.c_sep;
            finish(g, h, report, SeparatorOrModel::Separator(sep))
        }
        PeelOutcome::Flow { vertices, graph, flow } => {
            for attempt in 0..=cfg.embed_retries {
                report.embed_attempts = attempt + 1;
                let seed = cfg.seed.wrapping_add(attempt as u64);
                match embed_induced_minor(&graph, h, &flow, seed, cfg.resample_cap) {
                    Ok(found) => {
                        report.resamples += found.resamples;
                        let model = found.model.relabel_host(&vertices);
                        return finish(g, h, report, SeparatorOrModel::Model(model));
                    }
                    Err(Error::EmbeddingFailed { resamples }) => report.resamples += resamples,
                    Err(e) => return Err(e),
                }
            }
            report.anomaly = true;
            let forced = balanced_separator_or_flow(g, 1.0, &cfg.flow)?;
            report.cuts = forced.cuts;
            report.c_cut = forced.c_cut;
            report.c_sep = forced.c_sep;
            let PeelOutcome::Separator(sep) = forced.outcome else {
                unreachable!("gamma 1 admits no flow on two or more vertices")
            };
            finish(g, h, report, SeparatorOrModel::Separator(sep))
        }
    }
}

fn finish(g: &Graph, h: &Graph, mut report: SeparatorReport, outcome: SeparatorOrModel) -> Result<SeparatorReport> {
    let ok = match &outcome {
        SeparatorOrModel::Separator(sep) => {
            let denom = (g.n().max(2) as f64).log2() * ((h.n() + h.m()) as f64).sqrt() * (g.m().max(1) as f64).sqrt();
            report.c_size = sep.s.len() as f64 / denom;
            sep.is_valid(g) && sep.is_balanced(g.n())
        }
        SeparatorOrModel::Model(model) => verify_induced_minor_model(g, h, model)?,
    };
    assert!(ok, "produced certificate failed verification");
    report.outcome = outcome;
    Ok(report)
}
