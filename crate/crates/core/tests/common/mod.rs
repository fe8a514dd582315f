//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use mwlab::estimators::{Panel, PanelRow};
use mwlab::prob::{ContinuousSegment, MixedWageDistribution, SegmentShape};
use nalgebra::{DMatrix, DVector};

/// `erf(x)` from its Maclaurin series; accurate to ~1e-15 for |x| <= 2.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let x2 = x * x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -x2 / n;
        let add = term / (2.0 * n + 1.0);
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

/// `erfc(x)` for x >= 2 from the Laplace continued fraction (modified Lentz).
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        d = if d == 0.0 { tiny } else { 1.0 / d };
        c = x + a / c;
        if c == 0.0 {
            c = tiny;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (f * std::f64::consts::PI.sqrt())
}

pub fn erfc(x: f64) -> f64 {
    if x >= 2.0 {
        erfc_cf(x)
    } else if x <= -2.0 {
        2.0 - erfc_cf(-x)
    } else {
        1.0 - erf_series(x)
    }
}

/// Standard normal CDF oracle.
pub fn phi_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

pub fn phi_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (7, 15) quadrature of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (val, err) = gk15(f, a, b);
        if err <= tol || depth > 40 {
            return val;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol * 0.5, depth + 1) + rec(f, m, b, tol * 0.5, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// Unconditional density of the continuous part, built from the segment list.
pub fn segment_density(seg: &ContinuousSegment<f64>, w: f64) -> f64 {
    match seg.shape {
        SegmentShape::TruncatedNormal { latent, lower } => {
            if w < lower {
                return 0.0;
            }
            let tail = 1.0 - phi_cdf((lower - latent.mean) / latent.sd);
            seg.mass * phi_pdf((w - latent.mean) / latent.sd) / latent.sd / tail
        }
        SegmentShape::Triangular { start, base } => {
            let t = (w - start) / base;
            if (0.0..=1.0).contains(&t) {
                seg.mass * 2.0 / base * (1.0 - t)
            } else {
                0.0
            }
        }
    }
}

pub fn upper_limit(d: &MixedWageDistribution<f64>) -> f64 {
    d.segments()
        .iter()
        .map(|s| match s.shape {
            SegmentShape::TruncatedNormal { latent, .. } => latent.mean + 14.0 * latent.sd,
            SegmentShape::Triangular { start, base } => start + base,
        })
        .fold(d.spike_point(), f64::max)
}

/// Integrate `g(w) * density` over the continuous part, split at the kinks.
pub fn continuous_integral(d: &MixedWageDistribution<f64>, g: &dyn Fn(f64) -> f64, upto: f64) -> f64 {
    let mut knots = vec![d.spike_point(), upto];
    for s in d.segments() {
        if let SegmentShape::Triangular { start, base } = s.shape {
            knots.push(start + base);
        }
    }
    knots.retain(|&k| k >= d.spike_point() && k <= upto);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let f = |w: f64| g(w) * d.segments().iter().map(|s| segment_density(s, w)).sum::<f64>();
    knots.windows(2).map(|w| integrate(&f, w[0], w[1], 1e-14)).sum()
}

/// Balanced panel with the given per-row employment values and zero-filled
/// quantiles; `fa` is set per region.
pub fn synthetic_panel(regions: usize, fa: &[f64]) -> Panel<f64> {
    let rows = (0..regions)
        .flat_map(|r| {
            (0..2).map(move |t| PanelRow {
                region: r,
                period: t,
                employment: 0.0,
                quantiles: [0.0; 4],
                local_mw: 0.0,
                fa: 0.0,
                gap: 0.0,
            })
        })
        .map(|mut row| {
            row.fa = fa[row.region];
            row
        })
        .collect();
    Panel::new(rows).unwrap()
}

/// OLS with explicit region and period dummies, plus the slope block of its
/// CR1 covariance. `k_small` is the parameter count used in the small-sample factor.
pub fn dummy_regression(
    y: &[f64],
    x: &[Vec<f64>],
    regions: usize,
    region_fe: bool,
    time_fe: bool,
    k_small: usize,
) -> (Vec<f64>, DMatrix<f64>) {
    let n = y.len();
    let k = x.len();
    let mut cols: Vec<Vec<f64>> = x.to_vec();
    if region_fe {
        for r in 0..regions {
            cols.push((0..n).map(|i| if i / 2 == r { 1.0 } else { 0.0 }).collect());
        }
    } else {
        cols.push(vec![1.0; n]);
    }
    if time_fe {
        cols.push((0..n).map(|i| if i % 2 == 1 { 1.0 } else { 0.0 }).collect());
    }
    let p = cols.len();
    let xm = DMatrix::from_fn(n, p, |i, j| cols[j][i]);
    let yv = DVector::from_column_slice(y);
    let xtx = xm.transpose() * &xm;
    let inv = xtx.clone().try_inverse().expect("dummy design is singular");
    let beta = &inv * xm.transpose() * &yv;
    let resid = &yv - &xm * &beta;
    let mut meat = DMatrix::<f64>::zeros(p, p);
    for r in 0..regions {
        let mut s = DVector::<f64>::zeros(p);
        for i in [2 * r, 2 * r + 1] {
            for j in 0..p {
                s[j] += xm[(i, j)] * resid[i];
            }
        }
        meat += &s * s.transpose();
    }
    let g = regions as f64;
    let factor = g / (g - 1.0) * (n as f64 - 1.0) / (n as f64 - k_small as f64);
    let cov = &inv * meat * &inv * factor;
    (beta.as_slice()[..k].to_vec(), cov.view((0, 0), (k, k)).into_owned())
}

/// Two-stage least squares with explicit dummies, coefficients only.
pub fn dummy_tsls(y: &[f64], x: &[Vec<f64>], z: &[Vec<f64>], regions: usize) -> Vec<f64> {
    let n = y.len();
    let mut exog: Vec<Vec<f64>> = (0..regions).map(|r| (0..n).map(|i| if i / 2 == r { 1.0 } else { 0.0 }).collect()).collect();
    exog.push((0..n).map(|i| if i % 2 == 1 { 1.0 } else { 0.0 }).collect());
    let mat = |cols: &[Vec<f64>]| DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
    let xfull = mat(&[x.to_vec(), exog.clone()].concat());
    let zfull = mat(&[z.to_vec(), exog].concat());
    let pz = &zfull * (zfull.transpose() * &zfull).try_inverse().unwrap() * zfull.transpose();
    let xhat = &pz * &xfull;
    let yv = DVector::from_column_slice(y);
    let beta = (xhat.transpose() * &xfull).try_inverse().unwrap() * xhat.transpose() * yv;
    beta.as_slice()[..x.len()].to_vec()
}
