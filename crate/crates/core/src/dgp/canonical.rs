//! Competitive two-skill economy with CES technology.
//!
//! Each worker of skill `i` supplies `exp(e)` efficiency units with
//! `e ~ N(0, D^2)` and earns `p_i + e` in logs. Workers whose log marginal
//! product is below the minimum are not hired, so the observed wage law is
//! a mixture of two normals truncated at `mw` and no spike.

use serde::{Deserialize, Serialize};

use super::WageModel;
use crate::error::{Error, Result};
use crate::prob::{normal_cdf, normal_cdf_pair, ContinuousSegment, MixedWageDistribution, NormalParams};
use crate::scalar::Real;

/// Units in which the labor aggregates enter the production function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CesInputConvention {
    /// `L_i = s_i E(p_i, mw)`: raw efficiency units.
    EfficiencyUnits,
    /// `L_i = s_i exp(p_i) E(p_i, mw)`: efficiency units valued at their price.
    #[default]
    PriceWeighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParams<T> {
    pub alpha: T,
    pub elasticity: T,
    pub dispersion: T,
    pub skill_share: T,
}

impl<T: Real> CanonicalParams<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: T| Err(Error::InvalidParameter(format!("{what} out of range: {v}")));
        if !(self.alpha > T::zero() && self.alpha < T::one()) {
            return bad("CES share alpha", self.alpha);
        }
        if !(self.elasticity > T::zero()) || !self.elasticity.is_finite() || self.elasticity == T::one() {
            return bad("elasticity of substitution", self.elasticity);
        }
        if !(self.dispersion > T::zero()) || !self.dispersion.is_finite() {
            return bad("efficiency dispersion D", self.dispersion);
        }
        if !(self.skill_share >= T::lit(0.01) && self.skill_share <= T::lit(0.99)) {
            return bad("skill share", self.skill_share);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPrices<T> {
    pub p1: T,
    pub p2: T,
    /// Largest absolute violation of `p_i = log F_i` at the returned point.
    pub residual: T,
}

impl<T: Real> EquilibriumPrices<T> {
    pub fn skill_premium(&self) -> T {
        self.p1 - self.p2
    }
}

/// Mean efficiency units per worker of a type with log price `p` once workers
/// with `p + e < mw` are dropped.
pub fn efficiency_supply<T: Real>(p: T, mw: T, dispersion: T) -> T {
    let d2 = dispersion * dispersion;
    (d2 * T::lit(0.5)).exp() * normal_cdf((d2 - (mw - p)) / dispersion)
}

/// Accepted fixed-point residual.
pub fn solver_tolerance<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(256.0))
}

const MAX_ITERATIONS: usize = 5_000;

struct System<T> {
    params: CanonicalParams<T>,
    mw: T,
    convention: CesInputConvention,
}

impl<T: Real> System<T> {
    fn input(&self, p: T, share: T) -> T {
        let eff = share * efficiency_supply(p, self.mw, self.params.dispersion);
        match self.convention {
            CesInputConvention::EfficiencyUnits => eff,
            CesInputConvention::PriceWeighted => eff * p.exp(),
        }
    }

    fn inputs(&self, p1: T, p2: T) -> (T, T) {
        let s = self.params.skill_share;
        (self.input(p1, s), self.input(p2, T::one() - s))
    }

    /// `(log F_1, log F_2)` at the labor inputs implied by `(p1, p2)`.
    fn log_marginal_products(&self, p1: T, p2: T) -> (T, T) {
        let CanonicalParams { alpha, elasticity: e, .. } = self.params;
        let (l1, l2) = self.inputs(p1, p2);
        let rho = (e - T::one()) / e;
        // log F evaluated stably via log-sum-exp
        let a = alpha.ln() + rho * l1.ln();
        let b = (T::one() - alpha).ln() + rho * l2.ln();
        let m = a.max(b);
        let log_f = (m + ((a - m).exp() + (b - m).exp()).ln()) / rho;
        let inv_e = T::one() / e;
        (alpha.ln() + inv_e * (log_f - l1.ln()), (T::one() - alpha).ln() + inv_e * (log_f - l2.ln()))
    }

    fn residual(&self, p1: T, p2: T) -> T {
        let (g1, g2) = self.log_marginal_products(p1, p2);
        (g1 - p1).abs().max((g2 - p2).abs())
    }

    fn damped(&self, mut p1: T, mut p2: T) -> Option<EquilibriumPrices<T>> {
        let half = T::lit(0.5);
        let tol = solver_tolerance::<T>();
        for _ in 0..MAX_ITERATIONS {
            let (g1, g2) = self.log_marginal_products(p1, p2);
            if !(g1.is_finite() && g2.is_finite()) {
                return None;
            }
            let r = (g1 - p1).abs().max((g2 - p2).abs());
            if r <= tol * T::lit(0.01) {
                break;
            }
            p1 = half * p1 + half * g1;
            p2 = half * p2 + half * g2;
        }
        let residual = self.residual(p1, p2);
        (residual <= tol).then_some(EquilibriumPrices { p1, p2, residual })
    }

    /// Unskilled price on the unit-cost frontier for a given premium `g`.
    fn p2_given_gap(&self, g: T) -> T {
        let CanonicalParams { alpha, elasticity: e, .. } = self.params;
        let one_m_e = T::one() - e;
        let a = e * alpha.ln() + one_m_e * g;
        let b = e * (T::one() - alpha).ln();
        let m = a.max(b);
        -(m + ((a - m).exp() + (b - m).exp()).ln()) / one_m_e
    }

    fn gap_excess(&self, g: T) -> T {
        let CanonicalParams { alpha, elasticity: e, .. } = self.params;
        let p2 = self.p2_given_gap(g);
        let (l1, l2) = self.inputs(p2 + g, p2);
        (alpha / (T::one() - alpha)).ln() - (l1 / l2).ln() / e - g
    }

    fn bisection(&self) -> Result<EquilibriumPrices<T>> {
        let mut width = T::one();
        let (mut lo, mut hi) = (-width, width);
        let mut tries = 0;
        while self.gap_excess(lo) < T::zero() || self.gap_excess(hi) > T::zero() {
            width = width * T::lit(2.0);
            lo = -width;
            hi = width;
            tries += 1;
            if tries > 12 {
                return Err(Error::Solver { iterations: 0, residual: f64::NAN });
            }
        }
        let mut iterations = 0;
        while iterations < 400 {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.gap_excess(mid) > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
            iterations += 1;
        }
        let g = (lo + hi) * T::lit(0.5);
        let p2 = self.p2_given_gap(g);
        let p1 = p2 + g;
        let residual = self.residual(p1, p2);
        if residual <= solver_tolerance() {
            Ok(EquilibriumPrices { p1, p2, residual })
        } else {
            // polish on the fixed-point map from the bracketed point
            self.damped(p1, p2).ok_or(Error::Solver { iterations, residual: residual.to_f64_lossy() })
        }
    }
}

/// Equilibrium log prices per efficiency unit.
pub fn solve_equilibrium<T: Real>(
    params: &CanonicalParams<T>,
    mw: T,
    convention: CesInputConvention,
) -> Result<EquilibriumPrices<T>> {
    solve_equilibrium_from(params, mw, convention, (T::lit(0.5), T::zero()))
}

/// As [`solve_equilibrium`], starting the iteration at `start`.
pub fn solve_equilibrium_from<T: Real>(
    params: &CanonicalParams<T>,
    mw: T,
    convention: CesInputConvention,
    start: (T, T),
) -> Result<EquilibriumPrices<T>> {
    params.validate()?;
    if mw.is_nan() || mw == T::infinity() {
        return Err(Error::InvalidParameter(format!("minimum wage must be finite or -inf, got {mw}")));
    }
    let system = System { params: *params, mw, convention };
    match system.damped(start.0, start.1) {
        Some(eq) => Ok(eq),
        None => system.bisection(),
    }
}

/// Observed distribution and employment at the equilibrium for `mw`.
pub fn canonical_outcomes<T: Real>(
    params: &CanonicalParams<T>,
    mw: T,
    convention: CesInputConvention,
) -> Result<MixedWageDistribution<T>> {
    let eq = solve_equilibrium(params, mw, convention)?;
    let d = params.dispersion;
    let s = params.skill_share;
    let kept = |p: T| normal_cdf_pair((mw - p) / d).1;
    let m1 = s * kept(eq.p1);
    let m2 = (T::one() - s) * kept(eq.p2);
    let employment = m1 + m2;
    if !(employment > T::zero()) {
        return Err(Error::DegenerateRegion { employment: employment.to_f64_lossy() });
    }
    let segments = vec![
        ContinuousSegment::truncated_normal(NormalParams::new(eq.p1, d)?, mw, m1),
        ContinuousSegment::truncated_normal(NormalParams::new(eq.p2, d)?, mw, m2),
    ];
    MixedWageDistribution::new(mw, T::zero(), segments, employment)
}

/// Employment rate at the equilibrium for `mw`.
pub fn canonical_employment<T: Real>(params: &CanonicalParams<T>, mw: T, convention: CesInputConvention) -> Result<T> {
    let eq = solve_equilibrium(params, mw, convention)?;
    let d = params.dispersion;
    let s = params.skill_share;
    Ok(s * normal_cdf_pair((mw - eq.p1) / d).1 + (T::one() - s) * normal_cdf_pair((mw - eq.p2) / d).1)
}

/// CES share `alpha` that makes `p1 - p2 = target_gap` at skill share
/// `s_bar` and minimum wage `mw_low`.
pub fn calibrate_alpha<T: Real>(
    elasticity: T,
    dispersion: T,
    s_bar: T,
    mw_low: T,
    target_gap: T,
    convention: CesInputConvention,
) -> Result<T> {
    if !target_gap.is_finite() {
        return Err(Error::Calibration(format!("target gap must be finite, got {target_gap}")));
    }
    let gap = |alpha: T| -> Result<T> {
        let params = CanonicalParams { alpha, elasticity, dispersion, skill_share: s_bar };
        Ok(solve_equilibrium(&params, mw_low, convention)?.skill_premium() - target_gap)
    };
    let (mut lo, mut hi) = (T::lit(1e-3), T::one() - T::lit(1e-3));
    let (f_lo, f_hi) = (gap(lo)?, gap(hi)?);
    if f_lo > T::zero() || f_hi < T::zero() {
        return Err(Error::Calibration(format!(
            "premium {target_gap} not bracketed by alpha in [{lo}, {hi}] (residuals {f_lo}, {f_hi})"
        )));
    }
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = gap(mid)?;
        if f == T::zero() {
            return Ok(mid);
        }
        if f < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}

/// The canonical economy with its share parameter fixed; regions differ in
/// their skill share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalModel<T> {
    pub alpha: T,
    pub elasticity: T,
    pub dispersion: T,
    pub convention: CesInputConvention,
}

impl<T: Real> CanonicalModel<T> {
    pub fn params(&self, skill_share: T) -> CanonicalParams<T> {
        CanonicalParams { alpha: self.alpha, elasticity: self.elasticity, dispersion: self.dispersion, skill_share }
    }
}

impl<T: Real> WageModel<T> for CanonicalModel<T> {
    type Region = T;

    fn distribution(&self, skill_share: &T, mw: T) -> Result<MixedWageDistribution<T>> {
        canonical_outcomes(&self.params(*skill_share), mw, self.convention)
    }
}
