//! Standard normal kernels: distribution function, density and quantile.
//!
//! The distribution function follows Cody's rational Chebyshev
//! approximations (three ranges, with the `exp(-x^2/2)` factor split to keep
//! full relative precision in the tails). Absolute error is below `1e-15`
//! in double precision. The quantile starts from Acklam's rational
//! approximation and is polished with Halley steps against the distribution
//! function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

const CDF_A: [f64; 5] = [
    2.235_252_035_460_683_928_7,
    161.028_231_068_555_878_81,
    1_067.689_485_460_370_958_2,
    18_154.981_253_343_561_249,
    0.065_682_337_918_207_449_113,
];
const CDF_B: [f64; 4] = [
    47.202_581_904_688_241_87,
    976.098_551_737_776_693_22,
    10_260.932_208_618_978_205,
    45_507.789_335_026_729_956,
];
const CDF_C: [f64; 9] = [
    0.398_941_512_088_134_667_64,
    8.883_149_794_388_375_941_2,
    93.506_656_132_177_855_979,
    597.270_276_394_800_262_26,
    2_494.537_585_290_372_671_1,
    6_848.190_450_536_282_332_6,
    11_602.651_437_647_350_124,
    9_842.714_838_383_978_021_8,
    1.076_557_677_372_019_231_7e-8,
];
const CDF_D: [f64; 8] = [
    22.266_688_044_328_115_691,
    235.387_901_782_624_998_61,
    1_519.377_599_407_554_805,
    6_485.558_298_266_760_755,
    18_615.571_640_885_098_091,
    34_900.952_721_145_977_266,
    38_912.003_286_093_271_411,
    19_685.429_676_859_990_727,
];
const CDF_P: [f64; 6] = [
    0.215_898_534_057_956_99,
    0.127_401_161_160_247_363_9,
    0.022_235_277_870_649_807,
    0.001_421_619_193_227_893_466,
    2.911_287_495_116_879_2e-5,
    0.023_073_441_764_940_173_03,
];
const CDF_Q: [f64; 5] = [
    1.284_260_096_144_911_21,
    0.468_238_212_480_865_118,
    0.065_988_137_868_928_551_5,
    0.003_782_396_332_027_582_44,
    7.297_515_550_839_662_05e-5,
];

const ACKLAM_A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_690e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const ACKLAM_B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const ACKLAM_C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_276_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const ACKLAM_D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];

/// Location and dispersion of a normal law, in log-wage units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalParams<T> {
    pub mean: T,
    pub sd: T,
}

impl<T: Real> NormalParams<T> {
    pub fn new(mean: T, sd: T) -> Result<Self> {
        if !(sd > T::zero()) || !sd.is_finite() || mean.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "normal law needs a positive finite sd (mean {mean}, sd {sd})"
            )));
        }
        Ok(Self { mean, sd })
    }

    #[inline]
    pub fn standardize(&self, x: T) -> T {
        (x - self.mean) / self.sd
    }
}

/// Lower and upper tail probabilities `(Phi(z), 1 - Phi(z))`, each with full
/// relative precision in its own tail.
pub fn normal_cdf_pair<T: Real>(z: T) -> (T, T) {
    let c = T::lit;
    if z.is_nan() {
        return (z, z);
    }
    let y = z.abs();
    let (cum, ccum);
    if y <= c(0.674_489_75) {
        let (mut xnum, mut xden) = (T::zero(), T::zero());
        if y > T::epsilon() * c(0.5) {
            let xsq = z * z;
            xnum = c(CDF_A[4]) * xsq;
            xden = xsq;
            for i in 0..3 {
                xnum = (xnum + c(CDF_A[i])) * xsq;
                xden = (xden + c(CDF_B[i])) * xsq;
            }
        }
        let temp = z * (xnum + c(CDF_A[3])) / (xden + c(CDF_B[3]));
        cum = c(0.5) + temp;
        ccum = c(0.5) - temp;
        return (cum, ccum);
    }
    let tail = if y <= c(32f64.sqrt()) {
        let mut xnum = c(CDF_C[8]) * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + c(CDF_C[i])) * y;
            xden = (xden + c(CDF_D[i])) * y;
        }
        let temp = (xnum + c(CDF_C[7])) / (xden + c(CDF_D[7]));
        gaussian_factor(y) * temp
    } else if y < c(38.5) {
        let xsq = T::one() / (z * z);
        let mut xnum = c(CDF_P[5]) * xsq;
        let mut xden = xsq;
        for i in 0..4 {
            xnum = (xnum + c(CDF_P[i])) * xsq;
            xden = (xden + c(CDF_Q[i])) * xsq;
        }
        let mut temp = xsq * (xnum + c(CDF_P[4])) / (xden + c(CDF_Q[4]));
        temp = (c(std::f64::consts::FRAC_2_SQRT_PI * std::f64::consts::FRAC_1_SQRT_2 * 0.5) - temp) / y;
        gaussian_factor(y) * temp
    } else {
        T::zero()
    };
    if z > T::zero() {
        cum = T::one() - tail;
        ccum = tail;
    } else {
        cum = tail;
        ccum = T::one() - tail;
    }
    (cum, ccum)
}

/// `exp(-y^2/2)` evaluated as a product of two factors so that the rounding
/// error of `y^2` does not leak into the result.
#[inline]
fn gaussian_factor<T: Real>(y: T) -> T {
    let sixteen = T::lit(16.0);
    let ysq = (y * sixteen).trunc() / sixteen;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq * T::lit(0.5)).exp() * (-del * T::lit(0.5)).exp()
}

/// `Phi(zb) - Phi(za)` for `za <= zb`, taken in whichever tail keeps both
/// terms small.
#[inline]
pub fn normal_prob_between<T: Real>(za: T, zb: T) -> T {
    if zb <= T::zero() {
        normal_cdf_pair(zb).0 - normal_cdf_pair(za).0
    } else if za >= T::zero() {
        normal_cdf_pair(za).1 - normal_cdf_pair(zb).1
    } else {
        T::one() - normal_cdf_pair(za).0 - normal_cdf_pair(zb).1
    }
}

/// Standard normal distribution function. Saturates to 0 and 1 in the tails.
#[inline]
pub fn normal_cdf<T: Real>(z: T) -> T {
    normal_cdf_pair(z).0
}

/// Standard normal survival function `1 - Phi(z)`.
#[inline]
pub fn normal_sf<T: Real>(z: T) -> T {
    normal_cdf_pair(z).1
}

#[inline]
pub fn normal_pdf<T: Real>(z: T) -> T {
    let inv_sqrt_2pi = T::lit(0.398_942_280_401_432_677_94);
    inv_sqrt_2pi * (-(z * z) * T::lit(0.5)).exp()
}

fn acklam<T: Real>(q: T) -> T {
    let c = T::lit;
    let low = c(0.024_25);
    let poly = |coef: &[f64], x: T| coef.iter().fold(T::zero(), |acc, &k| acc * x + c(k));
    if q < low {
        let r = (c(-2.0) * q.ln()).sqrt();
        poly(&ACKLAM_C, r) / (poly(&ACKLAM_D, r) * r + T::one())
    } else if q <= T::one() - low {
        let u = q - c(0.5);
        let r = u * u;
        poly(&ACKLAM_A, r) * u / (poly(&ACKLAM_B, r) * r + T::one())
    } else {
        let r = (c(-2.0) * (T::one() - q).ln()).sqrt();
        -poly(&ACKLAM_C, r) / (poly(&ACKLAM_D, r) * r + T::one())
    }
}

/// Inverse of the standard normal distribution function on `(0, 1)`.
pub fn normal_quantile<T: Real>(q: T) -> Result<T> {
    if !(q > T::zero() && q < T::one()) {
        return Err(Error::Domain(format!("normal quantile needs 0 < q < 1, got {q}")));
    }
    let sqrt_2pi = T::lit(2.506_628_274_631_000_5);
    let mut x = acklam(q);
    for _ in 0..2 {
        // residual taken in the tail that is accurate at x
        let e = if x <= T::zero() {
            normal_cdf(x) - q
        } else {
            (T::one() - q) - normal_sf(x)
        };
        let u = e * sqrt_2pi * (x * x * T::lit(0.5)).exp();
        if !u.is_finite() {
            break;
        }
        x = x - u / (T::one() + x * u * T::lit(0.5));
    }
    Ok(x)
}
