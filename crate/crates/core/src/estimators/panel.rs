//! Balanced two-period region panels and the outcomes read from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Wage quantiles recorded for every region-period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WageQuantile {
    P10,
    P25,
    P50,
    P90,
}

impl WageQuantile {
    pub const ALL: [WageQuantile; 4] = [WageQuantile::P10, WageQuantile::P25, WageQuantile::P50, WageQuantile::P90];

    pub fn level(self) -> f64 {
        match self {
            WageQuantile::P10 => 0.10,
            WageQuantile::P25 => 0.25,
            WageQuantile::P50 => 0.50,
            WageQuantile::P90 => 0.90,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    fn label(self) -> &'static str {
        match self {
            WageQuantile::P10 => "p10",
            WageQuantile::P25 => "p25",
            WageQuantile::P50 => "p50",
            WageQuantile::P90 => "p90",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.label() == s)
    }
}

impl fmt::Display for WageQuantile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for WageQuantile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for WageQuantile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown wage quantile `{s}`")))
    }
}

/// A regression outcome: `emp`, a quantile such as `p25`, or a quantile gap
/// such as `p10-p50`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Employment,
    Quantile(WageQuantile),
    QuantileGap(WageQuantile, WageQuantile),
}

impl Outcome {
    /// Employment plus each of `quantiles` measured against `base`.
    pub fn gaps_against(base: WageQuantile, quantiles: &[WageQuantile]) -> Vec<Outcome> {
        std::iter::once(Outcome::Employment)
            .chain(quantiles.iter().map(|&q| Outcome::QuantileGap(q, base)))
            .collect()
    }

    /// Employment plus every quantile level.
    pub fn levels() -> Vec<Outcome> {
        std::iter::once(Outcome::Employment).chain(WageQuantile::ALL.into_iter().map(Outcome::Quantile)).collect()
    }

    pub fn value<T: Real>(&self, employment: T, quantiles: &[T; 4]) -> T {
        match *self {
            Outcome::Employment => employment,
            Outcome::Quantile(q) => quantiles[q.index()],
            Outcome::QuantileGap(q, base) => quantiles[q.index()] - quantiles[base.index()],
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Employment => f.write_str("emp"),
            Outcome::Quantile(q) => write!(f, "{q}"),
            Outcome::QuantileGap(q, b) => write!(f, "{q}-{b}"),
        }
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "emp" {
            return Ok(Outcome::Employment);
        }
        let bad = || Error::Config(format!("unknown outcome `{s}` (expected emp, p10, p25, p50, p90 or a gap like p10-p50)"));
        match s.split_once('-') {
            None => WageQuantile::parse(s).map(Outcome::Quantile).ok_or_else(bad),
            Some((a, b)) => {
                let a = WageQuantile::parse(a.trim()).ok_or_else(bad)?;
                let b = WageQuantile::parse(b.trim()).ok_or_else(bad)?;
                Ok(Outcome::QuantileGap(a, b))
            }
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One region-period observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PanelRow<T> {
    pub region: usize,
    pub period: usize,
    pub employment: T,
    /// Log-wage quantiles in [`WageQuantile::ALL`] order.
    pub quantiles: [T; 4],
    pub local_mw: T,
    /// Share of period-0 workers below the new minimum (same in both rows of a region).
    pub fa: T,
    /// Relative wage-bill gap to the new minimum (same in both rows of a region).
    pub gap: T,
}

impl<T: Real> PanelRow<T> {
    #[inline]
    pub fn quantile(&self, q: WageQuantile) -> T {
        self.quantiles[q.index()]
    }

    #[inline]
    pub fn outcome(&self, outcome: Outcome) -> T {
        outcome.value(self.employment, &self.quantiles)
    }
}

/// Balanced two-period panel stored region-major: row `2r + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel<T> {
    rows: Vec<PanelRow<T>>,
}

impl<T: Real> Panel<T> {
    pub fn new(mut rows: Vec<PanelRow<T>>) -> Result<Self> {
        if rows.len() % 2 != 0 || rows.is_empty() {
            return Err(Error::Panel(format!("{} rows cannot form a two-period panel", rows.len())));
        }
        rows.sort_by_key(|r| (r.region, r.period));
        let regions = rows.len() / 2;
        for (i, row) in rows.iter().enumerate() {
            if row.region != i / 2 || row.period != i % 2 {
                return Err(Error::Panel(format!(
                    "expected region {} period {}, found region {} period {}",
                    i / 2,
                    i % 2,
                    row.region,
                    row.period
                )));
            }
        }
        for r in 0..regions {
            let (a, b) = (&rows[2 * r], &rows[2 * r + 1]);
            if a.fa != b.fa || a.gap != b.gap {
                return Err(Error::Panel(format!("treatment intensity of region {r} differs across periods")));
            }
            for row in [a, b] {
                if row.quantiles.windows(2).any(|w| w[1] < w[0]) {
                    return Err(Error::Panel(format!("quantiles of region {r} are not ordered")));
                }
            }
        }
        Ok(Self { rows })
    }

    #[inline]
    pub fn regions(&self) -> usize {
        self.rows.len() / 2
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[PanelRow<T>] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, region: usize, period: usize) -> &PanelRow<T> {
        &self.rows[2 * region + period]
    }

    /// Outcome vector in panel row order.
    pub fn outcome(&self, outcome: Outcome) -> Vec<T> {
        self.rows.iter().map(|r| r.outcome(outcome)).collect()
    }

    /// Any per-row quantity in panel row order.
    pub fn column(&self, f: impl Fn(&PanelRow<T>) -> T) -> Vec<T> {
        self.rows.iter().map(f).collect()
    }

    /// Per-region quantity placed in the period-1 row, zero in period 0.
    pub fn post_interaction(&self, per_region: &[T]) -> Vec<T> {
        per_region.iter().flat_map(|&x| [T::zero(), x]).collect()
    }
}
