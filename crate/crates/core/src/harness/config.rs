//! Scenario configuration.
//!
//! Configs are JSON documents. A minimal example:
//!
//! ```json
//! {
//!   "name": "my_run",
//!   "dgp": { "model": "normal-markdown", "markdown": 0.7, "meta": "eff-baseline" },
//!   "policy": { "mw0": -1.0, "mw1": -0.8 },
//!   "outcomes": ["emp", "p10-p50"],
//!   "estimators": [ { "design": { "kind": "effective-mw" } } ]
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dgp::canonical::CesInputConvention;
use crate::dgp::markdown::{DensityScale, ExcessEmployment, LocalMinWageConfig};
use crate::error::{Error, Result};
use crate::estimators::{Design, Outcome};
use crate::sampler::{MetaCorrelations, MetaDistribution, SkillShareMeta};

/// Named meta-distributions of latent wage parameters.
pub const META_PRESETS: &[&str] = &[
    "eff-location-only",
    "eff-baseline",
    "eff-wide-dispersion",
    "eff-contemporaneous",
    "eff-us-full",
    "fa-permanent-location",
    "fa-location-shocks",
    "fa-dispersion-shocks",
    "fa-dispersion-falls",
];

pub fn meta_preset(name: &str) -> Option<MetaDistribution> {
    let eff = (0.542, 0.510);
    let fa = (0.526, 0.526);
    let c = MetaCorrelations::default;
    let meta = match name {
        "eff-location-only" => MetaDistribution::new(eff, [0.123, 0.0, 0.112, 0.0], MetaCorrelations { mu0_mu1: 0.894, ..c() }),
        "eff-baseline" => MetaDistribution::new(
            eff,
            [0.123, 0.026, 0.112, 0.049],
            MetaCorrelations { mu0_mu1: 0.894, sigma0_sigma1: 0.456, ..c() },
        ),
        "eff-wide-dispersion" => MetaDistribution::new(
            eff,
            [0.123, 0.039, 0.112, 0.074],
            MetaCorrelations { mu0_mu1: 0.894, sigma0_sigma1: 0.456, ..c() },
        ),
        "eff-contemporaneous" => MetaDistribution::new(
            eff,
            [0.123, 0.026, 0.112, 0.049],
            MetaCorrelations { mu0_sigma0: 0.076, mu0_mu1: 0.894, sigma0_sigma1: 0.456, mu1_sigma1: 0.076, ..c() },
        ),
        "eff-us-full" => MetaDistribution::new(
            eff,
            [0.123, 0.026, 0.112, 0.049],
            MetaCorrelations {
                mu0_sigma0: 0.076,
                mu0_mu1: 0.894,
                mu0_sigma1: 0.366,
                sigma0_mu1: 0.063,
                sigma0_sigma1: 0.456,
                mu1_sigma1: 0.264,
            },
        ),
        "fa-permanent-location" => MetaDistribution::new(fa, [0.118, 0.0, 0.118, 0.0], MetaCorrelations { mu0_mu1: 0.999, ..c() }),
        "fa-location-shocks" => MetaDistribution::new(fa, [0.118, 0.0, 0.118, 0.0], MetaCorrelations { mu0_mu1: 0.894, ..c() }),
        "fa-dispersion-shocks" => MetaDistribution::new(
            fa,
            [0.118, 0.038, 0.118, 0.038],
            MetaCorrelations { mu0_mu1: 0.894, sigma0_sigma1: 0.456, ..c() },
        ),
        "fa-dispersion-falls" => MetaDistribution::new(
            eff,
            [0.118, 0.038, 0.118, 0.038],
            MetaCorrelations { mu0_mu1: 0.894, sigma0_sigma1: 0.456, ..c() },
        ),
        _ => return None,
    };
    Some(meta)
}

/// A named meta-distribution or explicit values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetaSpec {
    Named(String),
    Inline(MetaDistribution),
}

impl MetaSpec {
    pub fn resolve(&self) -> Result<MetaDistribution> {
        match self {
            MetaSpec::Named(name) => meta_preset(name).ok_or_else(|| {
                Error::Config(format!("unknown meta-distribution `{name}`; known: {}", META_PRESETS.join(", ")))
            }),
            MetaSpec::Inline(meta) => Ok(*meta),
        }
    }
}

/// How the CES share parameter is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlphaSpec {
    Fixed(f64),
    /// Match a skill premium at the mean skill share and a given minimum wage.
    Calibrate { at_mw: f64, target_premium: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DgpConfig {
    NormalMarkdown {
        markdown: f64,
        #[serde(default)]
        pos_height: f64,
        #[serde(default = "default_pos_base")]
        pos_base: f64,
        #[serde(default)]
        density: DensityScale,
        #[serde(default)]
        excess_employment: ExcessEmployment,
        meta: MetaSpec,
    },
    Canonical {
        elasticity: f64,
        dispersion: f64,
        #[serde(default)]
        skill_shares: SkillShareMeta,
        alpha: AlphaSpec,
        #[serde(default)]
        convention: CesInputConvention,
    },
}

fn default_pos_base() -> f64 {
    0.25
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub mw0: f64,
    pub mw1: f64,
    /// Placebo run: the DGP keeps `mw1 = mw0`, and treatment intensities are
    /// measured against this hypothetical minimum instead.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placebo_mw1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local: Option<LocalMinWageConfig>,
}

impl PolicyConfig {
    /// Minimum against which FA and Gap are measured, before local premia.
    pub fn intensity_target(&self) -> f64 {
        self.placebo_mw1.unwrap_or(self.mw1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub design: Design,
}

impl EstimatorSpec {
    pub fn new(design: Design) -> Self {
        Self { label: None, design }
    }

    pub fn labelled(label: impl Into<String>, design: Design) -> Self {
        Self { label: Some(label.into()), design }
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.design.default_label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    /// Panel caption in emitted tables.
    #[serde(default)]
    pub panel: String,
    pub dgp: DgpConfig,
    pub policy: PolicyConfig,
    pub outcomes: Vec<Outcome>,
    #[serde(default)]
    pub estimators: Vec<EstimatorSpec>,
    #[serde(default = "default_regions")]
    pub regions: usize,
    #[serde(default = "default_replications")]
    pub replications: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_regions() -> usize {
    200
}
fn default_replications() -> u64 {
    1000
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario configs always serialize")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(format!("scenario `{}`: {msg}", self.name)));
        if self.regions < 2 {
            return fail(format!("need at least 2 regions, got {}", self.regions));
        }
        if self.replications < 1 {
            return fail("need at least one replication".into());
        }
        if self.outcomes.is_empty() {
            return fail("no outcomes requested".into());
        }
        let p = &self.policy;
        if !p.mw0.is_finite() || !p.mw1.is_finite() {
            return fail("minimum wages must be finite".into());
        }
        match p.placebo_mw1 {
            Some(h) => {
                if p.mw1 != p.mw0 {
                    return fail(format!("placebo runs hold the minimum fixed, but mw1 = {} != mw0 = {}", p.mw1, p.mw0));
                }
                if !(h > p.mw0) {
                    return fail(format!("hypothetical minimum {h} must exceed mw0 = {}", p.mw0));
                }
                if p.local.is_some() {
                    return fail("placebo runs with local minimum wages are not supported".into());
                }
            }
            None => {
                if !(p.mw1 > p.mw0) {
                    return fail(format!("mw1 = {} must exceed mw0 = {} outside placebo runs", p.mw1, p.mw0));
                }
            }
        }
        if let Some(local) = &p.local {
            local.validate()?;
        }
        match &self.dgp {
            DgpConfig::NormalMarkdown { markdown, pos_height, pos_base, meta, .. } => {
                if !(*markdown > 0.0 && *markdown <= 1.0) {
                    return fail(format!("markdown must lie in (0, 1], got {markdown}"));
                }
                if !(*pos_height >= 0.0) || !(*pos_base > 0.0) {
                    return fail(format!("need pos_height >= 0 and pos_base > 0, got {pos_height}, {pos_base}"));
                }
                meta.resolve()?;
            }
            DgpConfig::Canonical { elasticity, dispersion, alpha, .. } => {
                if !(*elasticity > 0.0) || *elasticity == 1.0 {
                    return fail(format!("elasticity must be positive and != 1, got {elasticity}"));
                }
                if !(*dispersion > 0.0) {
                    return fail(format!("dispersion must be positive, got {dispersion}"));
                }
                if let AlphaSpec::Fixed(a) = alpha {
                    if !(*a > 0.0 && *a < 1.0) {
                        return fail(format!("alpha must lie in (0, 1), got {a}"));
                    }
                }
            }
        }
        Ok(())
    }
}
