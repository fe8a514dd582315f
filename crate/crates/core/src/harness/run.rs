//! Replication driver and Monte Carlo aggregation.

use rayon::prelude::*;

use super::config::{AlphaSpec, DgpConfig, ScenarioConfig};
use crate::dgp::canonical::{calibrate_alpha, CanonicalModel};
use crate::dgp::markdown::{draw_local_minimum_wages, NormalMarkdownModel};
use crate::dgp::WageModel;
use crate::error::{Error, Result};
use crate::estimators::{Outcome, Panel, PanelRow, RegressionResult};
use crate::prob::NormalParams;
use crate::rng::{Purpose, StreamKey};
use crate::sampler::{draw_skill_shares, MetaSampler, SkillShareMeta};
use crate::truth::{evaluate_region, AteReport, PolicyPath, RegionEvaluation};

/// A scenario with its one-off work (meta factorization, calibration) done.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub config: ScenarioConfig,
    model: PreparedModel,
}

#[derive(Debug, Clone)]
enum PreparedModel {
    Markdown { model: NormalMarkdownModel<f64>, sampler: MetaSampler },
    Canonical { model: CanonicalModel<f64>, shares: SkillShareMeta },
}

impl PreparedScenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let model = match &config.dgp {
            DgpConfig::NormalMarkdown { markdown, pos_height, pos_base, density, excess_employment, meta } => PreparedModel::Markdown {
                model: NormalMarkdownModel {
                    markdown: *markdown,
                    pos_height: *pos_height,
                    pos_base: *pos_base,
                    density: *density,
                    excess: *excess_employment,
                },
                sampler: meta.resolve()?.sampler()?,
            },
            DgpConfig::Canonical { elasticity, dispersion, skill_shares, alpha, convention } => {
                let alpha = match *alpha {
                    AlphaSpec::Fixed(a) => a,
                    AlphaSpec::Calibrate { at_mw, target_premium } => {
                        calibrate_alpha(*elasticity, *dispersion, skill_shares.mean, at_mw, target_premium, *convention)?
                    }
                };
                PreparedModel::Canonical {
                    model: CanonicalModel { alpha, elasticity: *elasticity, dispersion: *dispersion, convention: *convention },
                    shares: *skill_shares,
                }
            }
        };
        Ok(Self { config, model })
    }

    /// The CES share in use, for canonical scenarios.
    pub fn alpha(&self) -> Option<f64> {
        match &self.model {
            PreparedModel::Canonical { model, .. } => Some(model.alpha),
            PreparedModel::Markdown { .. } => None,
        }
    }
}

/// Everything one replication produces.
#[derive(Debug, Clone)]
pub struct ReplicationOutput {
    pub truth: AteReport<f64>,
    pub panel: Panel<f64>,
    /// `results[estimator][outcome]`, in config order.
    pub results: Vec<Vec<RegressionResult<f64>>>,
}

fn evaluate_all<M>(model: &M, thetas: &[(M::Region, M::Region)], paths: &[PolicyPath<f64>]) -> Result<Vec<RegionEvaluation<f64>>>
where
    M: WageModel<f64>,
    M::Region: PartialEq,
{
    thetas
        .par_iter()
        .zip(paths.par_iter())
        .enumerate()
        .map(|(r, ((a, b), path))| evaluate_region(model, (a, b), path).map_err(|e| e.with_region(r)))
        .collect()
}

fn build_panel(evals: &[RegionEvaluation<f64>], paths: &[PolicyPath<f64>], targets: &[f64]) -> Result<Panel<f64>> {
    let mut rows = Vec::with_capacity(2 * evals.len());
    for (r, ((e, path), &target)) in evals.iter().zip(paths).zip(targets).enumerate() {
        let base = e.realized(0);
        let fa = base.fraction_below(target);
        let gap = base.gap_ratio(target);
        for t in 0..2 {
            let obs = e.realized_observables(t);
            rows.push(PanelRow {
                region: r,
                period: t,
                employment: obs.employment,
                quantiles: obs.quantiles,
                local_mw: if t == 0 { path.mw0 } else { path.mw1 },
                fa,
                gap,
            });
        }
    }
    Panel::new(rows)
}

fn run_replication_inner(prepared: &PreparedScenario, replication: u64) -> Result<ReplicationOutput> {
    let cfg = &prepared.config;
    let r = cfg.regions;
    let policy = &cfg.policy;
    let key = |purpose| StreamKey::new(cfg.seed, replication, purpose);
    let paths: Vec<PolicyPath<f64>> = match &policy.local {
        Some(local) => draw_local_minimum_wages(&mut key(Purpose::LocalMinWage).rng(), r, (policy.mw0, policy.mw1), local)?
            .into_iter()
            .map(|(mw0, mw1)| PolicyPath { mw0, mw1 })
            .collect(),
        None => vec![PolicyPath { mw0: policy.mw0, mw1: policy.mw1 }; r],
    };
    let targets: Vec<f64> = match policy.placebo_mw1 {
        Some(h) => vec![h; r],
        None => paths.iter().map(|p| p.mw1).collect(),
    };
    let evals = match &prepared.model {
        PreparedModel::Markdown { model, sampler } => {
            let mut rng = key(Purpose::RegionParams).rng();
            let thetas: Vec<(NormalParams<f64>, NormalParams<f64>)> =
                (0..r).map(|_| sampler.draw(&mut rng).map(|d| (d.period0, d.period1))).collect::<Result<_>>()?;
            evaluate_all(model, &thetas, &paths)?
        }
        PreparedModel::Canonical { model, shares } => {
            let s = draw_skill_shares(shares, r, &mut key(Purpose::SkillShares).rng())?;
            let thetas: Vec<(f64, f64)> = s.into_iter().map(|v| (v, v)).collect();
            evaluate_all(model, &thetas, &paths)?
        }
    };
    let truth = AteReport::from_evaluations(&evals, &cfg.outcomes);
    let panel = build_panel(&evals, &paths, &targets)?;
    let results = cfg
        .estimators
        .iter()
        .map(|spec| cfg.outcomes.iter().map(|&o| spec.design.estimate(&panel, o)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicationOutput { truth, panel, results })
}

/// One replication: draw regions, evaluate the DGP, estimate every design.
pub fn run_replication(prepared: &PreparedScenario, replication: u64) -> Result<ReplicationOutput> {
    run_replication_inner(prepared, replication).map_err(|e| e.in_replication(&prepared.config.name, replication))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruthSummary {
    pub outcome: Outcome,
    pub ate: f64,
    pub ate0: f64,
    pub ate1: f64,
    /// Monte Carlo standard deviations of `ATE_0 - ATE_1` across replications.
    pub ate_gap_sd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub estimator: String,
    pub outcome: Outcome,
    pub true_ate: f64,
    pub est_ate: f64,
    /// Average of the per-replication clustered standard errors.
    pub se: f64,
    /// Dispersion of the estimates across replications.
    pub mc_sd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub scenario: String,
    pub panel: String,
    pub seed: u64,
    pub replications: u64,
    pub truth: Vec<TruthSummary>,
    pub cells: Vec<CellSummary>,
}

impl McSummary {
    pub fn cell(&self, estimator: &str, outcome: Outcome) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.estimator == estimator && c.outcome == outcome)
    }

    pub fn true_ate(&self, outcome: Outcome) -> Option<f64> {
        self.truth.iter().find(|t| t.outcome == outcome).map(|t| t.ate)
    }

    pub fn estimators(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in &self.cells {
            if !out.contains(&c.estimator) {
                out.push(c.estimator.clone());
            }
        }
        out
    }
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Per-replication numbers kept for aggregation.
struct Compact {
    ate0: Vec<f64>,
    ate1: Vec<f64>,
    /// `[estimator][outcome] -> (ate, se)`
    est: Vec<Vec<(f64, f64)>>,
}

fn compact(out: ReplicationOutput) -> Result<Compact> {
    let est = out
        .results
        .iter()
        .map(|row| {
            row.iter()
                .map(|res| match (res.ate(), res.ate_se()) {
                    (Some(a), Some(s)) => Ok((a, s)),
                    _ => Err(Error::Config("design returned no predicted effect".into())),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Compact { ate0: out.truth.ate0, ate1: out.truth.ate1, est })
}

/// Aggregate over replications `0..replications`. Replications run in
/// parallel; results are reduced in index order, so the summary does not
/// depend on the thread count.
pub fn run_scenario(config: &ScenarioConfig) -> Result<McSummary> {
    let prepared = PreparedScenario::new(config.clone())?;
    run_prepared(&prepared)
}

pub fn run_prepared(prepared: &PreparedScenario) -> Result<McSummary> {
    let cfg = &prepared.config;
    let reps: Vec<Compact> = (0..cfg.replications)
        .into_par_iter()
        .map(|i| run_replication(prepared, i).and_then(compact))
        .collect::<Result<Vec<_>>>()?;
    let n_out = cfg.outcomes.len();
    let truth: Vec<TruthSummary> = (0..n_out)
        .map(|k| {
            let a0: Vec<f64> = reps.iter().map(|c| c.ate0[k]).collect();
            let a1: Vec<f64> = reps.iter().map(|c| c.ate1[k]).collect();
            let ate: Vec<f64> = reps.iter().map(|c| (c.ate0[k] + c.ate1[k]) * 0.5).collect();
            let diff: Vec<f64> = reps.iter().map(|c| c.ate0[k] - c.ate1[k]).collect();
            TruthSummary {
                outcome: cfg.outcomes[k],
                ate: mean_sd(&ate).0,
                ate0: mean_sd(&a0).0,
                ate1: mean_sd(&a1).0,
                ate_gap_sd: mean_sd(&diff).1,
            }
        })
        .collect();
    let mut cells = Vec::new();
    for (j, spec) in cfg.estimators.iter().enumerate() {
        let label = spec.label();
        for k in 0..n_out {
            let est: Vec<f64> = reps.iter().map(|c| c.est[j][k].0).collect();
            let se: Vec<f64> = reps.iter().map(|c| c.est[j][k].1).collect();
            let (est_ate, mc_sd) = mean_sd(&est);
            cells.push(CellSummary {
                estimator: label.clone(),
                outcome: cfg.outcomes[k],
                true_ate: truth[k].ate,
                est_ate,
                se: mean_sd(&se).0,
                mc_sd,
            });
        }
    }
    Ok(McSummary {
        scenario: cfg.name.clone(),
        panel: cfg.panel.clone(),
        seed: cfg.seed,
        replications: cfg.replications,
        truth,
        cells,
    })
}
