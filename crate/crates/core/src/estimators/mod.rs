//! Regression engine and research designs.

mod designs;
pub mod linalg;
mod panel;
mod regression;

pub use designs::{
    binary_design, binary_treatment, cross_iv_design, effective_mw_design, fa_design, gap_design, quadratic_design,
    AmsMedian, CrossIvDirection, Design, EffectiveIv, EffectiveMwOptions, Intensity,
};
pub use panel::{Outcome, Panel, PanelRow, WageQuantile};
pub use regression::{
    ols_fe, tsls, weak_instrument_threshold, Column, Diagnostics, FixedEffects, PredictedAte, RegressionResult,
};
