//! Monte Carlo laboratory for regional minimum wage research designs.
//!
//! Structural models map region primitives and a minimum wage to a wage
//! distribution with a spike at the minimum. Replications draw regions,
//! build a two-period panel, compute true effects from the model, and
//! compare them with the effects predicted by reduced-form designs.
//!
//! The probability kernels, models, estimators and truth are generic over
//! [`Real`] (`f32` or `f64`); the aliases below fix `f64`.

pub mod dgp;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod prob;
pub mod rng;
pub mod sampler;
pub mod scalar;
pub mod truth;

pub use error::{Error, Result};
pub use scalar::Real;

pub type WageDistribution = prob::MixedWageDistribution<f64>;
pub type LatentParams = prob::NormalParams<f64>;
pub type Regression = estimators::RegressionResult<f64>;
pub type WagePanel = estimators::Panel<f64>;
pub type Ate = truth::AteReport<f64>;
pub type MarkdownModel = dgp::markdown::NormalMarkdownModel<f64>;
pub type CesModel = dgp::canonical::CanonicalModel<f64>;
