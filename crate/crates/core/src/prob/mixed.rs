//! Observed wage laws: a point mass at the statutory minimum plus continuous
//! pieces above it.
//!
//! Masses are stored unconditionally (per member of the population). Every
//! public query is conditional on employment, so it divides by
//! [`MixedWageDistribution::employment`].

use serde::{Deserialize, Serialize};

use super::normal::{normal_cdf_pair, normal_prob_between, normal_quantile, NormalParams};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Shape of one continuous piece of the observed wage law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SegmentShape<T> {
    /// Latent normal restricted to `[lower, inf)`.
    TruncatedNormal { latent: NormalParams<T>, lower: T },
    /// Density falling linearly from its peak at `start` to zero at `start + base`.
    Triangular { start: T, base: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousSegment<T> {
    pub shape: SegmentShape<T>,
    /// Unconditional population mass carried by this piece.
    pub mass: T,
}

/// `t e^t - (e^t - 1)`, accurate for small `t`.
fn tri_moment_remainder<T: Real>(t: T) -> T {
    if t.abs() < T::lit(0.1) {
        // sum_{k>=2} t^k (k-1)/k!
        let mut term = t * t * T::lit(0.5);
        let mut acc = term;
        for k in 3..24u32 {
            term = term * t / T::from_u32(k).unwrap();
            acc = acc + term * T::from_u32(k - 1).unwrap();
        }
        acc
    } else {
        t * t.exp() - t.exp_m1()
    }
}

impl<T: Real> ContinuousSegment<T> {
    pub fn truncated_normal(latent: NormalParams<T>, lower: T, mass: T) -> Self {
        Self { shape: SegmentShape::TruncatedNormal { latent, lower }, mass }
    }

    pub fn triangular(start: T, base: T, mass: T) -> Self {
        Self { shape: SegmentShape::Triangular { start, base }, mass }
    }

    fn validate(&self, spike_point: T) -> Result<()> {
        if !(self.mass >= T::zero()) || !self.mass.is_finite() {
            return Err(Error::InvalidParameter(format!("segment mass must be >= 0, got {}", self.mass)));
        }
        match self.shape {
            SegmentShape::TruncatedNormal { latent, lower } => {
                NormalParams::new(latent.mean, latent.sd)?;
                if !lower.is_finite() {
                    return Err(Error::InvalidParameter(format!("truncation point must be finite, got {lower}")));
                }
                if lower < spike_point {
                    return Err(Error::InvalidParameter(format!(
                        "truncated-normal support starts at {lower}, below the spike at {spike_point}"
                    )));
                }
                if self.mass > T::zero() && normal_cdf_pair(latent.standardize(lower)).1 <= T::zero() {
                    return Err(Error::InvalidParameter(format!(
                        "truncation at {lower} leaves no latent mass to carry {}",
                        self.mass
                    )));
                }
            }
            SegmentShape::Triangular { start, base } => {
                if !(base > T::zero()) || !base.is_finite() || !start.is_finite() {
                    return Err(Error::InvalidParameter(format!("triangular base must be > 0, got {base}")));
                }
                if start < spike_point {
                    return Err(Error::InvalidParameter(format!(
                        "triangular support starts at {start}, below the spike at {spike_point}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Unconditional mass at or below `w`.
    pub fn mass_below(&self, w: T) -> T {
        if self.mass == T::zero() {
            return T::zero();
        }
        match self.shape {
            SegmentShape::TruncatedNormal { latent, lower } => {
                if w <= lower {
                    return T::zero();
                }
                let za = latent.standardize(lower);
                let zw = latent.standardize(w);
                let inside = normal_prob_between(za, zw);
                let norm = normal_cdf_pair(za).1;
                (self.mass * inside / norm).min(self.mass)
            }
            SegmentShape::Triangular { start, base } => {
                let t = ((w - start) / base).max(T::zero()).min(T::one());
                let rest = T::one() - t;
                self.mass * (T::one() - rest * rest)
            }
        }
    }

    /// Unconditional integral of `exp(w)` over the part of the segment at or
    /// below `c` (`c = +inf` gives the whole segment).
    pub fn level_below(&self, c: T) -> T {
        if self.mass == T::zero() {
            return T::zero();
        }
        match self.shape {
            SegmentShape::TruncatedNormal { latent, lower } => {
                if c <= lower {
                    return T::zero();
                }
                let s2 = latent.sd * latent.sd;
                let shift = latent.mean + s2;
                let za = (lower - shift) / latent.sd;
                let zc = if c.is_infinite() { T::infinity() } else { (c - shift) / latent.sd };
                let norm = normal_cdf_pair(latent.standardize(lower)).1;
                self.mass / norm * (latent.mean + s2 * T::lit(0.5)).exp() * normal_prob_between(za, zc)
            }
            SegmentShape::Triangular { start, base } => {
                let t = (c - start).max(T::zero()).min(base);
                let two = T::lit(2.0);
                self.mass * two * start.exp() / (base * base) * (base * t.exp_m1() - tri_moment_remainder(t))
            }
        }
    }

    fn upper_bracket(&self) -> T {
        match self.shape {
            SegmentShape::TruncatedNormal { latent, lower } => {
                (latent.mean + T::lit(12.0) * latent.sd).max(lower)
            }
            SegmentShape::Triangular { start, base } => start + base,
        }
    }
}

/// Observed log-wage law of one region-period: a spike at the minimum wage,
/// continuous pieces above it, and the employment-to-population ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedWageDistribution<T> {
    spike_point: T,
    spike_mass: T,
    segments: Vec<ContinuousSegment<T>>,
    employment: T,
}

impl<T: Real> MixedWageDistribution<T> {
    /// Tolerance used for the mass accounting identity.
    pub fn mass_tolerance() -> T {
        T::lit(1e-12).max(T::lit(64.0) * T::epsilon())
    }

    pub fn new(spike_point: T, spike_mass: T, segments: Vec<ContinuousSegment<T>>, employment: T) -> Result<Self> {
        if employment > T::one() {
            return Err(Error::InvalidParameter(format!("employment {employment} exceeds the population")));
        }
        Self::new_unbounded(spike_point, spike_mass, segments, employment)
    }

    /// Like [`Self::new`] but accepts an employed measure above one, for
    /// models that add workers on top of a unit population.
    pub fn new_unbounded(spike_point: T, spike_mass: T, segments: Vec<ContinuousSegment<T>>, employment: T) -> Result<Self> {
        if !spike_point.is_finite() {
            return Err(Error::InvalidParameter(format!("spike point must be finite, got {spike_point}")));
        }
        if !(spike_mass >= T::zero() && spike_mass <= T::one()) {
            return Err(Error::InvalidParameter(format!("spike mass must lie in [0, 1], got {spike_mass}")));
        }
        if !(employment > T::zero()) {
            return Err(Error::DegenerateRegion { employment: employment.to_f64_lossy() });
        }
        for seg in &segments {
            seg.validate(spike_point)?;
        }
        let total = segments.iter().fold(spike_mass, |acc, s| acc + s.mass);
        if (total - employment).abs() > Self::mass_tolerance() {
            return Err(Error::InvalidParameter(format!(
                "masses sum to {total} but employment is {employment}"
            )));
        }
        Ok(Self { spike_point, spike_mass, segments, employment })
    }

    #[inline]
    pub fn spike_point(&self) -> T {
        self.spike_point
    }

    #[inline]
    pub fn spike_mass(&self) -> T {
        self.spike_mass
    }

    #[inline]
    pub fn segments(&self) -> &[ContinuousSegment<T>] {
        &self.segments
    }

    #[inline]
    pub fn employment(&self) -> T {
        self.employment
    }

    /// Share of employed workers sitting exactly at the minimum.
    #[inline]
    pub fn spike_share(&self) -> T {
        self.spike_mass / self.employment
    }

    fn unconditional_cdf(&self, w: T) -> T {
        if w < self.spike_point {
            return T::zero();
        }
        self.segments.iter().fold(self.spike_mass, |acc, s| acc + s.mass_below(w))
    }

    /// `P(w_i <= w | employed)`.
    pub fn cdf(&self, w: T) -> T {
        (self.unconditional_cdf(w) / self.employment).min(T::one())
    }

    /// `P(w_i < cutoff | employed)`.
    pub fn fraction_below(&self, cutoff: T) -> T {
        if cutoff <= self.spike_point {
            return T::zero();
        }
        self.cdf(cutoff)
    }

    /// Smallest `w` with `cdf(w) >= q`.
    pub fn quantile(&self, q: T) -> Result<T> {
        if !(q > T::zero() && q < T::one()) {
            return Err(Error::Domain(format!("wage quantile needs 0 < q < 1, got {q}")));
        }
        if q <= self.spike_share() {
            return Ok(self.spike_point);
        }
        let target = q * self.employment;
        let active: Vec<&ContinuousSegment<T>> = self.segments.iter().filter(|s| s.mass > T::zero()).collect();
        if let [seg] = active.as_slice() {
            if let SegmentShape::TruncatedNormal { latent, lower } = seg.shape {
                return self.truncated_normal_quantile(latent, lower, seg.mass, target);
            }
        }
        Ok(self.bisect(target))
    }

    fn truncated_normal_quantile(&self, latent: NormalParams<T>, lower: T, mass: T, target: T) -> Result<T> {
        let frac = ((target - self.spike_mass) / mass).max(T::zero()).min(T::one());
        let za = latent.standardize(lower);
        let (lo_a, hi_a) = normal_cdf_pair(za);
        let below = lo_a + frac * hi_a;
        let above = hi_a * (T::one() - frac);
        if above <= T::zero() {
            return Ok(self.bisect(target));
        }
        let z = if below <= T::lit(0.5) {
            normal_quantile(below)?
        } else {
            -normal_quantile(above)?
        };
        Ok((latent.mean + latent.sd * z).max(lower))
    }

    fn bisect(&self, target: T) -> T {
        let mut lo = self.spike_point;
        let mut hi = self.segments.iter().fold(lo, |acc, s| acc.max(s.upper_bracket()));
        let tol = T::lit(1e-13).max(T::epsilon() * T::lit(4.0));
        for _ in 0..200 {
            let mid = lo + (hi - lo) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            let f = self.unconditional_cdf(mid);
            if f >= target {
                hi = mid;
                if f - target <= tol * self.employment {
                    break;
                }
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// `E[exp(w) | employed]`.
    pub fn mean_level(&self) -> T {
        let total = self
            .segments
            .iter()
            .fold(self.spike_mass * self.spike_point.exp(), |acc, s| acc + s.level_below(T::infinity()));
        total / self.employment
    }

    /// `E[max(exp(cutoff) - exp(w), 0) | employed]`.
    pub fn gap_numerator(&self, cutoff: T) -> T {
        if cutoff <= self.spike_point {
            return T::zero();
        }
        let ec = cutoff.exp();
        let spike = self.spike_mass * (ec - self.spike_point.exp());
        let cont = self
            .segments
            .iter()
            .fold(T::zero(), |acc, s| acc + s.mass_below(cutoff) * ec - s.level_below(cutoff));
        ((spike + cont) / self.employment).max(T::zero())
    }

    /// Wage-bill increase needed to lift everyone below `cutoff` up to it,
    /// relative to the current wage bill.
    pub fn gap_ratio(&self, cutoff: T) -> T {
        self.gap_numerator(cutoff) / self.mean_level()
    }
}
