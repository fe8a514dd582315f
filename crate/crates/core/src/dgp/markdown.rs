//! Normal latent wages with a monopsony markdown.
//!
//! Workers whose latent log wage falls below `mw + log m` lose their jobs,
//! those between that point and `mw` are paid exactly `mw`, and everyone
//! above keeps the latent wage. An optional triangular block of new workers
//! just above `mw` produces positive employment effects.

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::WageModel;
use crate::error::{Error, Result};
use crate::prob::{normal_cdf_pair, normal_pdf, ContinuousSegment, MixedWageDistribution, NormalParams};
use crate::scalar::Real;

/// How the latent density at the minimum scales the triangular block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityScale {
    /// `phi(z) / sigma`, the density of the latent log wage itself.
    #[default]
    Proper,
    /// `phi(z)`, the standard normal density at the standardized point.
    Standardized,
}

/// What to do when the triangular block lifts employment above one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExcessEmployment {
    #[default]
    Reject,
    /// Keep the extra workers; employment is then a measure relative to the
    /// baseline population rather than a ratio bounded by one.
    Allow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkdownPolicy<T> {
    pub mw: T,
    pub markdown: T,
    pub pos_height: T,
    pub pos_base: T,
    pub density: DensityScale,
    pub excess: ExcessEmployment,
}

impl<T: Real> MarkdownPolicy<T> {
    pub fn new(mw: T, markdown: T) -> Self {
        Self {
            mw,
            markdown,
            pos_height: T::zero(),
            pos_base: T::zero(),
            density: DensityScale::Proper,
            excess: ExcessEmployment::Reject,
        }
    }

    pub fn with_positive_effects(mut self, height: T, base: T) -> Self {
        self.pos_height = height;
        self.pos_base = base;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.markdown > T::zero() && self.markdown <= T::one()) {
            return Err(Error::InvalidParameter(format!("markdown must lie in (0, 1], got {}", self.markdown)));
        }
        if !self.mw.is_finite() {
            return Err(Error::InvalidParameter(format!("minimum wage must be finite, got {}", self.mw)));
        }
        if !(self.pos_height >= T::zero()) {
            return Err(Error::InvalidParameter(format!("P_height must be >= 0, got {}", self.pos_height)));
        }
        if self.pos_height > T::zero() && !(self.pos_base > T::zero()) {
            return Err(Error::InvalidParameter(format!("P_base must be > 0, got {}", self.pos_base)));
        }
        Ok(())
    }
}

/// Observed wage law of one region-period.
pub fn simulate_region<T: Real>(latent: &NormalParams<T>, policy: &MarkdownPolicy<T>) -> Result<MixedWageDistribution<T>> {
    policy.validate()?;
    NormalParams::new(latent.mean, latent.sd)?;
    let z_mw = latent.standardize(policy.mw);
    let z_trunc = latent.standardize(policy.mw + policy.markdown.ln());
    let (below_mw, above_mw) = normal_cdf_pair(z_mw);
    let (below_trunc, above_trunc) = normal_cdf_pair(z_trunc);
    let spike_mass = (below_mw - below_trunc).max(T::zero());
    let mut segments = vec![ContinuousSegment::truncated_normal(*latent, policy.mw, above_mw)];
    let mut employment = above_trunc;
    if policy.pos_height > T::zero() {
        let mut density = normal_pdf(z_mw);
        if policy.density == DensityScale::Proper {
            density = density / latent.sd;
        }
        let added = policy.pos_base * policy.pos_height * T::lit(0.5) * density;
        segments.push(ContinuousSegment::triangular(policy.mw, policy.pos_base, added));
        employment = employment + added;
    }
    if employment > T::one() && policy.excess == ExcessEmployment::Reject {
        return Err(Error::InvalidParameter(format!(
            "added employment pushes the ratio to {employment}; lower P_height or P_base"
        )));
    }
    if !(employment > T::zero()) {
        return Err(Error::DegenerateRegion { employment: employment.to_f64_lossy() });
    }
    MixedWageDistribution::new_unbounded(policy.mw, spike_mass, segments, employment)
}

/// The markdown model with its minimum-wage-independent parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalMarkdownModel<T> {
    pub markdown: T,
    pub pos_height: T,
    pub pos_base: T,
    pub density: DensityScale,
    pub excess: ExcessEmployment,
}

impl<T: Real> NormalMarkdownModel<T> {
    pub fn policy(&self, mw: T) -> MarkdownPolicy<T> {
        MarkdownPolicy {
            mw,
            markdown: self.markdown,
            pos_height: self.pos_height,
            pos_base: self.pos_base,
            density: self.density,
            excess: self.excess,
        }
    }
}

impl<T: Real> WageModel<T> for NormalMarkdownModel<T> {
    type Region = NormalParams<T>;

    fn distribution(&self, region: &NormalParams<T>, mw: T) -> Result<MixedWageDistribution<T>> {
        simulate_region(region, &self.policy(mw))
    }
}

/// Regions with their own minimum wage above the national one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalMinWageConfig {
    pub share_with_local: f64,
    #[serde(default = "default_gap_mean")]
    pub gap_mean: f64,
    #[serde(default = "default_gap_sd")]
    pub gap_sd: f64,
    #[serde(default = "default_floor_gap")]
    pub floor_gap: f64,
    #[serde(default = "default_no_reduction")]
    pub no_reduction: bool,
}

fn default_gap_mean() -> f64 {
    0.25
}
fn default_gap_sd() -> f64 {
    0.075
}
fn default_floor_gap() -> f64 {
    0.05
}
fn default_no_reduction() -> bool {
    true
}

impl LocalMinWageConfig {
    pub fn with_share(share_with_local: f64) -> Self {
        Self {
            share_with_local,
            gap_mean: default_gap_mean(),
            gap_sd: default_gap_sd(),
            floor_gap: default_floor_gap(),
            no_reduction: default_no_reduction(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.share_with_local) {
            return Err(Error::Config(format!("share_with_local must lie in [0, 1], got {}", self.share_with_local)));
        }
        if !(self.gap_sd > 0.0) {
            return Err(Error::Config(format!("gap_sd must be > 0, got {}", self.gap_sd)));
        }
        if !(self.floor_gap >= 0.0) {
            return Err(Error::Config(format!("floor_gap must be >= 0, got {}", self.floor_gap)));
        }
        Ok(())
    }

    /// Number of regions drawn into the local-minimum subset each period.
    pub fn treated_count(&self, regions: usize) -> usize {
        ((self.share_with_local * regions as f64).round() as usize).min(regions)
    }
}

/// Per-region `(mw_0, mw_1)` paths. A fresh subset of regions receives a
/// local premium in each period; period-1 minima never fall below the
/// region's period-0 minimum when `no_reduction` is set.
pub fn draw_local_minimum_wages<R: Rng + ?Sized>(
    rng: &mut R,
    regions: usize,
    national: (f64, f64),
    cfg: &LocalMinWageConfig,
) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    if regions == 0 {
        return Err(Error::Config("need at least one region".into()));
    }
    if national.1 < national.0 {
        return Err(Error::Config(format!(
            "national minimum falls from {} to {}",
            national.0, national.1
        )));
    }
    let gap = Normal::new(cfg.gap_mean, cfg.gap_sd).map_err(|e| Error::Config(e.to_string()))?;
    let k = cfg.treated_count(regions);
    let period = |base: f64, rng: &mut R| {
        let mut mw = vec![base; regions];
        if k > 0 {
            let mut chosen: Vec<usize> = sample(rng, regions, k).into_vec();
            chosen.sort_unstable();
            for r in chosen {
                mw[r] = base + gap.sample(rng).max(cfg.floor_gap);
            }
        }
        mw
    };
    let first = period(national.0, rng);
    let second = period(national.1, rng);
    Ok(first
        .into_iter()
        .zip(second)
        .map(|(a, b)| if cfg.no_reduction { (a, b.max(a)) } else { (a, b) })
        .collect())
}
