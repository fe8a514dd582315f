//! Probability kernels shared by every data-generating process.

mod mixed;
mod normal;

pub use mixed::{ContinuousSegment, MixedWageDistribution, SegmentShape};
pub use normal::{normal_cdf, normal_cdf_pair, normal_pdf, normal_prob_between, normal_quantile, normal_sf, NormalParams};
