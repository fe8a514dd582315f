//! The research designs: which regressors to build from a panel, how to fit
//! them, and how to turn coefficients into a predicted average effect.

use serde::{Deserialize, Serialize};

use super::panel::{Outcome, Panel, WageQuantile};
use super::regression::{ols_fe, tsls, Column, FixedEffects, RegressionResult};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EffectiveIv {
    #[default]
    None,
    /// Statutory minimum and its square.
    TwoInstruments,
    /// Adds the minimum interacted with the region's median wage.
    Ams,
}

/// Which median enters the interaction instrument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmsMedian {
    #[default]
    TwoPeriodAverage,
    Initial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveMwOptions {
    #[serde(default = "yes")]
    pub region_fe: bool,
    #[serde(default = "yes")]
    pub time_fe: bool,
    #[serde(default = "median")]
    pub deflator: WageQuantile,
    #[serde(default)]
    pub iv: EffectiveIv,
    #[serde(default)]
    pub ams_median: AmsMedian,
}

fn yes() -> bool {
    true
}
fn median() -> WageQuantile {
    WageQuantile::P50
}

impl Default for EffectiveMwOptions {
    fn default() -> Self {
        Self { region_fe: true, time_fe: true, deflator: WageQuantile::P50, iv: EffectiveIv::None, ams_median: AmsMedian::TwoPeriodAverage }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Intensity {
    #[serde(rename = "fa")]
    FractionAffected,
    Gap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossIvDirection {
    /// Fraction affected instrumented by the gap measure.
    FaByGap,
    /// Gap measure instrumented by the fraction affected.
    GapByFa,
}

/// Effective minimum wage `mw_rt - w_{q,r,t}` in panel order.
fn effective_mw<T: Real>(panel: &Panel<T>, deflator: WageQuantile) -> Vec<T> {
    panel.column(|r| r.local_mw - r.quantile(deflator))
}

fn mean<T: Real>(v: &[T]) -> T {
    v.iter().copied().sum::<T>() / T::from_usize_lossy(v.len())
}

/// Regress `outcome` on the effective minimum wage and its square; the
/// predicted effect averages `beta * d(eff) + gamma * d(eff^2)` over regions.
pub fn effective_mw_design<T: Real>(panel: &Panel<T>, outcome: Outcome, opts: &EffectiveMwOptions) -> Result<RegressionResult<T>> {
    let eff = effective_mw(panel, opts.deflator);
    let eff_sq: Vec<T> = eff.iter().map(|&e| e * e).collect();
    let fe = FixedEffects { region: opts.region_fe, time: opts.time_fe };
    let y = panel.outcome(outcome);
    let regions = panel.regions();
    let d_eff: Vec<T> = (0..regions).map(|r| eff[2 * r + 1] - eff[2 * r]).collect();
    let d_eff_sq: Vec<T> = (0..regions).map(|r| eff_sq[2 * r + 1] - eff_sq[2 * r]).collect();
    let weights = [mean(&d_eff), mean(&d_eff_sq)];
    let x = [Column::new("effective_mw", eff), Column::new("effective_mw_sq", eff_sq)];
    let fit = match opts.iv {
        EffectiveIv::None => ols_fe(panel, &y, &x, fe)?,
        EffectiveIv::TwoInstruments | EffectiveIv::Ams => {
            let mw = panel.column(|r| r.local_mw);
            let mw_sq: Vec<T> = mw.iter().map(|&m| m * m).collect();
            let mut z = vec![Column::new("mw", mw.clone()), Column::new("mw_sq", mw_sq)];
            if opts.iv == EffectiveIv::Ams {
                let half = T::lit(0.5);
                let med: Vec<T> = (0..regions)
                    .map(|r| {
                        let m0 = panel.row(r, 0).quantile(WageQuantile::P50);
                        match opts.ams_median {
                            AmsMedian::TwoPeriodAverage => (m0 + panel.row(r, 1).quantile(WageQuantile::P50)) * half,
                            AmsMedian::Initial => m0,
                        }
                    })
                    .collect();
                let inter = (0..panel.len()).map(|i| mw[i] * med[i / 2]).collect();
                z.push(Column::new("mw_x_median", inter));
            }
            tsls(panel, &y, &x, &z, fe)?
        }
    };
    Ok(fit.with_prediction(&weights))
}

fn intensity<T: Real>(panel: &Panel<T>, which: Intensity) -> Vec<T> {
    (0..panel.regions())
        .map(|r| {
            let row = panel.row(r, 0);
            match which {
                Intensity::FractionAffected => row.fa,
                Intensity::Gap => row.gap,
            }
        })
        .collect()
}

fn intensity_name(which: Intensity) -> &'static str {
    match which {
        Intensity::FractionAffected => "fa_post",
        Intensity::Gap => "gap_post",
    }
}

/// Two-way fixed effects on `x_r * 1{t = 1}`; effect = `mean(x) * beta`.
fn linear_intensity_design<T: Real>(panel: &Panel<T>, outcome: Outcome, x: &[T], name: &str) -> Result<RegressionResult<T>> {
    let y = panel.outcome(outcome);
    let col = Column::new(name, panel.post_interaction(x));
    Ok(ols_fe(panel, &y, &[col], FixedEffects::BOTH)?.with_prediction(&[mean(x)]))
}

pub fn fa_design<T: Real>(panel: &Panel<T>, outcome: Outcome) -> Result<RegressionResult<T>> {
    let x = intensity(panel, Intensity::FractionAffected);
    linear_intensity_design(panel, outcome, &x, intensity_name(Intensity::FractionAffected))
}

pub fn gap_design<T: Real>(panel: &Panel<T>, outcome: Outcome) -> Result<RegressionResult<T>> {
    let x = intensity(panel, Intensity::Gap);
    linear_intensity_design(panel, outcome, &x, intensity_name(Intensity::Gap))
}

/// Regions ranked by initial median wage (ties by id); the lowest
/// `round(share * R)` are treated.
pub fn binary_treatment<T: Real>(panel: &Panel<T>, treated_share: f64) -> Result<Vec<T>> {
    if !(treated_share > 0.0 && treated_share < 1.0) {
        return Err(Error::Config(format!("treated share must lie in (0, 1), got {treated_share}")));
    }
    let regions = panel.regions();
    let mut order: Vec<usize> = (0..regions).collect();
    order.sort_by(|&a, &b| {
        let ma = panel.row(a, 0).quantile(WageQuantile::P50);
        let mb = panel.row(b, 0).quantile(WageQuantile::P50);
        ma.partial_cmp(&mb).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    let k = (treated_share * regions as f64).round() as usize;
    let mut d = vec![T::zero(); regions];
    for &r in order.iter().take(k) {
        d[r] = T::one();
    }
    Ok(d)
}

pub fn binary_design<T: Real>(panel: &Panel<T>, outcome: Outcome, treated_share: f64) -> Result<RegressionResult<T>> {
    let d = binary_treatment(panel, treated_share)?;
    linear_intensity_design(panel, outcome, &d, "treated_post")
}

/// Intensity and its square interacted with the post period; effect =
/// mean over regions of `beta x_r + gamma x_r^2`.
pub fn quadratic_design<T: Real>(panel: &Panel<T>, outcome: Outcome, which: Intensity) -> Result<RegressionResult<T>> {
    let x = intensity(panel, which);
    let x_sq: Vec<T> = x.iter().map(|&v| v * v).collect();
    let y = panel.outcome(outcome);
    let name = intensity_name(which);
    let cols = [
        Column::new(name, panel.post_interaction(&x)),
        Column::new(format!("{name}_sq"), panel.post_interaction(&x_sq)),
    ];
    Ok(ols_fe(panel, &y, &cols, FixedEffects::BOTH)?.with_prediction(&[mean(&x), mean(&x_sq)]))
}

pub fn cross_iv_design<T: Real>(panel: &Panel<T>, outcome: Outcome, direction: CrossIvDirection) -> Result<RegressionResult<T>> {
    let (endo, inst) = match direction {
        CrossIvDirection::FaByGap => (Intensity::FractionAffected, Intensity::Gap),
        CrossIvDirection::GapByFa => (Intensity::Gap, Intensity::FractionAffected),
    };
    let x = intensity(panel, endo);
    let z = intensity(panel, inst);
    let y = panel.outcome(outcome);
    let xc = [Column::new(intensity_name(endo), panel.post_interaction(&x))];
    let zc = [Column::new(intensity_name(inst), panel.post_interaction(&z))];
    Ok(tsls(panel, &y, &xc, &zc, FixedEffects::BOTH)?.with_prediction(&[mean(&x)]))
}

/// A configured estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Design {
    EffectiveMw(EffectiveMwOptions),
    FractionAffected,
    Gap,
    Binary { treated_share: f64 },
    Quadratic { intensity: Intensity },
    CrossIv { direction: CrossIvDirection },
}

impl Design {
    pub fn estimate<T: Real>(&self, panel: &Panel<T>, outcome: Outcome) -> Result<RegressionResult<T>> {
        match *self {
            Design::EffectiveMw(ref opts) => effective_mw_design(panel, outcome, opts),
            Design::FractionAffected => fa_design(panel, outcome),
            Design::Gap => gap_design(panel, outcome),
            Design::Binary { treated_share } => binary_design(panel, outcome, treated_share),
            Design::Quadratic { intensity } => quadratic_design(panel, outcome, intensity),
            Design::CrossIv { direction } => cross_iv_design(panel, outcome, direction),
        }
    }

    /// Row label used in tables.
    pub fn default_label(&self) -> String {
        match self {
            Design::EffectiveMw(o) => match o.iv {
                EffectiveIv::TwoInstruments => "Two instruments".into(),
                EffectiveIv::Ams => "Three instruments (AMS)".into(),
                EffectiveIv::None => {
                    let mut s = String::from("Effective min. wage");
                    if o.deflator != WageQuantile::P50 {
                        s.push_str(&format!(", {}", o.deflator));
                    }
                    if !o.region_fe {
                        s.push_str(", no region FE");
                    }
                    if !o.time_fe {
                        s.push_str(", no time FE");
                    }
                    s
                }
            },
            Design::FractionAffected => "Fraction affected".into(),
            Design::Gap => "Gap measure".into(),
            Design::Binary { treated_share } => format!("Binary measure, {:.0}% treated", treated_share * 100.0),
            Design::Quadratic { intensity: Intensity::FractionAffected } => "Quadratic on FA".into(),
            Design::Quadratic { intensity: Intensity::Gap } => "Quadratic on GAP".into(),
            Design::CrossIv { direction: CrossIvDirection::FaByGap } => "FA instrumented by GAP".into(),
            Design::CrossIv { direction: CrossIvDirection::GapByFa } => "GAP instrumented by FA".into(),
        }
    }
}
