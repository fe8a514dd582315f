//! Least squares and two-stage least squares on a two-period panel with
//! absorbed fixed effects and region-clustered (CR1) covariance.

use serde::{Deserialize, Serialize};

use super::linalg::{dot, scaled_condition_number, Cholesky, SquareMatrix};
use super::panel::Panel;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedEffects {
    pub region: bool,
    pub time: bool,
}

impl FixedEffects {
    pub const BOTH: FixedEffects = FixedEffects { region: true, time: true };
    pub const REGION: FixedEffects = FixedEffects { region: true, time: false };
    pub const TIME: FixedEffects = FixedEffects { region: false, time: true };
    pub const NONE: FixedEffects = FixedEffects { region: false, time: false };

    /// Parameters counted in the small-sample factor besides the slopes.
    /// Region effects are nested in the clusters and do not count.
    pub fn extra_dof(&self) -> usize {
        match (self.region, self.time) {
            (true, true) => 1,
            (true, false) => 0,
            (false, true) => 2,
            (false, false) => 1,
        }
    }

    /// Project a panel-ordered vector off the fixed effects (and off the
    /// constant when no effect absorbs it).
    pub fn absorb<T: Real>(&self, x: &[T]) -> Vec<T> {
        let regions = x.len() / 2;
        let half = T::lit(0.5);
        let n_r = T::from_usize_lossy(regions);
        let period_mean = |t: usize| (0..regions).map(|r| x[2 * r + t]).sum::<T>() / n_r;
        match (self.region, self.time) {
            (true, true) => {
                let (m0, m1) = (period_mean(0), period_mean(1));
                let grand = (m0 + m1) * half;
                let mut out = Vec::with_capacity(x.len());
                for r in 0..regions {
                    let rm = (x[2 * r] + x[2 * r + 1]) * half;
                    out.push(x[2 * r] - rm - m0 + grand);
                    out.push(x[2 * r + 1] - rm - m1 + grand);
                }
                out
            }
            (true, false) => (0..regions)
                .flat_map(|r| {
                    let rm = (x[2 * r] + x[2 * r + 1]) * half;
                    [x[2 * r] - rm, x[2 * r + 1] - rm]
                })
                .collect(),
            (false, true) => {
                let (m0, m1) = (period_mean(0), period_mean(1));
                (0..regions).flat_map(|r| [x[2 * r] - m0, x[2 * r + 1] - m1]).collect()
            }
            (false, false) => {
                let m = x.iter().copied().sum::<T>() / T::from_usize_lossy(x.len());
                x.iter().map(|&v| v - m).collect()
            }
        }
    }
}

/// A named regressor or instrument in panel row order.
#[derive(Debug, Clone, PartialEq)]
pub struct Column<T> {
    pub name: String,
    pub values: Vec<T>,
}

impl<T> Column<T> {
    pub fn new(name: impl Into<String>, values: Vec<T>) -> Self {
        Self { name: name.into(), values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics<T> {
    pub observations: usize,
    pub clusters: usize,
    /// Parameters used in the small-sample factor.
    pub parameters: usize,
    /// Scaled condition number of the instrumented regressors' cross product
    /// (two-stage fits only).
    pub first_stage_condition: Option<T>,
}

/// Predicted average effect `c' beta` with its delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedAte<T> {
    pub ate: T,
    pub se: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionResult<T> {
    pub names: Vec<String>,
    pub coefficients: Vec<T>,
    /// Row-major cluster-robust covariance of `coefficients`.
    pub covariance: Vec<T>,
    pub diagnostics: Diagnostics<T>,
    pub predicted: Option<PredictedAte<T>>,
}

impl<T: Real> RegressionResult<T> {
    pub fn coefficient(&self, name: &str) -> Option<T> {
        self.names.iter().position(|n| n == name).map(|i| self.coefficients[i])
    }

    pub fn std_error(&self, i: usize) -> T {
        let k = self.coefficients.len();
        self.covariance[i * k + i].max(T::zero()).sqrt()
    }

    fn covariance_matrix(&self) -> SquareMatrix<T> {
        SquareMatrix { n: self.coefficients.len(), data: self.covariance.clone() }
    }

    /// Attach the linear combination `weights' beta` as the predicted effect.
    pub fn with_prediction(mut self, weights: &[T]) -> Self {
        let ate = dot(weights, &self.coefficients);
        let se = self.covariance_matrix().quad_form(weights).max(T::zero()).sqrt();
        self.predicted = Some(PredictedAte { ate, se });
        self
    }

    pub fn ate(&self) -> Option<T> {
        self.predicted.map(|p| p.ate)
    }

    pub fn ate_se(&self) -> Option<T> {
        self.predicted.map(|p| p.se)
    }
}

fn rank_tolerance<T: Real>() -> T {
    T::epsilon() * T::lit(1024.0)
}

fn check_lengths<T>(panel_len: usize, y: &[T], cols: &[Column<T>]) -> Result<()> {
    if y.len() != panel_len {
        return Err(Error::Panel(format!("outcome has {} rows, panel has {panel_len}", y.len())));
    }
    for c in cols {
        if c.values.len() != panel_len {
            return Err(Error::Panel(format!("column `{}` has {} rows, panel has {panel_len}", c.name, c.values.len())));
        }
    }
    Ok(())
}

/// Factor `X'X` of absorbed columns, naming the first column that is
/// (numerically) spanned by the fixed effects and earlier columns.
fn factor_gram<T: Real>(absorbed: &[Vec<T>], raw: &[Column<T>]) -> Result<Cholesky<T>> {
    let gram = SquareMatrix::gram(absorbed);
    let reference: Vec<T> = raw.iter().map(|c| dot(&c.values, &c.values)).collect();
    Cholesky::new(&gram, &reference, rank_tolerance()).map_err(|j| Error::RankDeficient { column: raw[j].name.clone() })
}

/// CR1 cluster-robust covariance `c * B M B` with `M` summed over regions.
fn cluster_covariance<T: Real>(bread: &SquareMatrix<T>, scores: &[Vec<T>], resid: &[T], parameters: usize) -> Result<SquareMatrix<T>> {
    let k = scores.len();
    let n = resid.len();
    let g = n / 2;
    if g < 2 {
        return Err(Error::Panel("need at least two regions for clustered errors".into()));
    }
    if n <= parameters {
        return Err(Error::Panel(format!("{n} observations cannot identify {parameters} parameters")));
    }
    let mut meat = SquareMatrix::zeros(k);
    let mut s = vec![T::zero(); k];
    for r in 0..g {
        for (j, col) in scores.iter().enumerate() {
            s[j] = col[2 * r] * resid[2 * r] + col[2 * r + 1] * resid[2 * r + 1];
        }
        for i in 0..k {
            for j in 0..k {
                meat.set(i, j, meat.get(i, j) + s[i] * s[j]);
            }
        }
    }
    let gt = T::from_usize_lossy(g);
    let nt = T::from_usize_lossy(n);
    let kt = T::from_usize_lossy(parameters);
    let factor = gt / (gt - T::one()) * (nt - T::one()) / (nt - kt);
    let mut cov = bread.sandwich(&meat);
    cov.scale(factor);
    Ok(cov)
}

/// Two-way (or one-way) fixed-effects OLS with region-clustered covariance.
pub fn ols_fe<T: Real>(panel: &Panel<T>, y: &[T], regressors: &[Column<T>], fe: FixedEffects) -> Result<RegressionResult<T>> {
    check_lengths(panel.len(), y, regressors)?;
    if regressors.is_empty() {
        return Err(Error::Config("regression needs at least one regressor".into()));
    }
    let yt = fe.absorb(y);
    let xt: Vec<Vec<T>> = regressors.iter().map(|c| fe.absorb(&c.values)).collect();
    let chol = factor_gram(&xt, regressors)?;
    let xty: Vec<T> = xt.iter().map(|c| dot(c, &yt)).collect();
    let beta = chol.solve(&xty);
    let resid: Vec<T> = (0..yt.len())
        .map(|i| yt[i] - xt.iter().zip(&beta).fold(T::zero(), |acc, (c, &b)| acc + c[i] * b))
        .collect();
    let parameters = regressors.len() + fe.extra_dof();
    let cov = cluster_covariance(&chol.inverse(), &xt, &resid, parameters)?;
    Ok(RegressionResult {
        names: regressors.iter().map(|c| c.name.clone()).collect(),
        coefficients: beta,
        covariance: cov.data,
        diagnostics: Diagnostics { observations: y.len(), clusters: panel.regions(), parameters, first_stage_condition: None },
        predicted: None,
    })
}

/// Condition number above which a first stage counts as uninformative.
pub fn weak_instrument_threshold<T: Real>() -> T {
    T::one() / (T::epsilon().sqrt() * T::lit(1e-2))
}

/// Two-stage least squares with the same fixed effects in both stages.
pub fn tsls<T: Real>(
    panel: &Panel<T>,
    y: &[T],
    endogenous: &[Column<T>],
    instruments: &[Column<T>],
    fe: FixedEffects,
) -> Result<RegressionResult<T>> {
    check_lengths(panel.len(), y, endogenous)?;
    check_lengths(panel.len(), y, instruments)?;
    if endogenous.is_empty() {
        return Err(Error::Config("two-stage fit needs at least one endogenous regressor".into()));
    }
    if instruments.len() < endogenous.len() {
        return Err(Error::Config(format!(
            "{} instruments cannot identify {} endogenous regressors",
            instruments.len(),
            endogenous.len()
        )));
    }
    let yt = fe.absorb(y);
    let xt: Vec<Vec<T>> = endogenous.iter().map(|c| fe.absorb(&c.values)).collect();
    let zt: Vec<Vec<T>> = instruments.iter().map(|c| fe.absorb(&c.values)).collect();
    let zchol = factor_gram(&zt, instruments).map_err(|_| Error::WeakInstruments { condition: f64::INFINITY })?;
    // first stage: fitted values of every endogenous column
    let zx = SquareMatrix::cross(&zt, &xt);
    let n = yt.len();
    let mut xhat: Vec<Vec<T>> = Vec::with_capacity(xt.len());
    for j in 0..xt.len() {
        let rhs: Vec<T> = zx.iter().map(|row| row[j]).collect();
        let pi = zchol.solve(&rhs);
        xhat.push((0..n).map(|i| zt.iter().zip(&pi).fold(T::zero(), |acc, (z, &p)| acc + z[i] * p)).collect());
    }
    let hat_gram = SquareMatrix::gram(&xhat);
    let condition = scaled_condition_number(&hat_gram);
    let weak = || Error::WeakInstruments { condition: condition.to_f64_lossy() };
    if !(condition < weak_instrument_threshold()) {
        return Err(weak());
    }
    let reference: Vec<T> = endogenous.iter().map(|c| dot(&c.values, &c.values)).collect();
    let chol = Cholesky::new(&hat_gram, &reference, rank_tolerance()).map_err(|_| weak())?;
    let xhy: Vec<T> = xhat.iter().map(|c| dot(c, &yt)).collect();
    let beta = chol.solve(&xhy);
    let resid: Vec<T> = (0..n)
        .map(|i| yt[i] - xt.iter().zip(&beta).fold(T::zero(), |acc, (c, &b)| acc + c[i] * b))
        .collect();
    let parameters = endogenous.len() + fe.extra_dof();
    let cov = cluster_covariance(&chol.inverse(), &xhat, &resid, parameters)?;
    Ok(RegressionResult {
        names: endogenous.iter().map(|c| c.name.clone()).collect(),
        coefficients: beta,
        covariance: cov.data,
        diagnostics: Diagnostics {
            observations: n,
            clusters: panel.regions(),
            parameters,
            first_stage_condition: Some(condition),
        },
        predicted: None,
    })
}
