//! Data-generating processes mapping region parameters and a minimum wage to
//! an observed wage distribution.

pub mod canonical;
pub mod markdown;

use crate::error::Result;
use crate::prob::MixedWageDistribution;
use crate::scalar::Real;

/// A structural model that can be evaluated at any minimum wage, which is
/// what the potential-outcome comparisons need.
pub trait WageModel<T: Real>: Sync {
    /// Per-region primitives that do not depend on the minimum wage.
    type Region: Copy + Send + Sync;

    fn distribution(&self, region: &Self::Region, mw: T) -> Result<MixedWageDistribution<T>>;
}
