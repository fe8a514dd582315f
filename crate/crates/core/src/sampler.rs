//! Cross-region meta-distributions of latent wage parameters.

use nalgebra::{Matrix4, SymmetricEigen};
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::NormalParams;

/// Off-diagonal correlations of `(mu_0, sigma_0, mu_1, sigma_1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetaCorrelations {
    #[serde(default)]
    pub mu0_sigma0: f64,
    #[serde(default)]
    pub mu0_mu1: f64,
    #[serde(default)]
    pub mu0_sigma1: f64,
    #[serde(default)]
    pub sigma0_mu1: f64,
    #[serde(default)]
    pub sigma0_sigma1: f64,
    #[serde(default)]
    pub mu1_sigma1: f64,
}

impl MetaCorrelations {
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let c = self;
        [
            [1.0, c.mu0_sigma0, c.mu0_mu1, c.mu0_sigma1],
            [c.mu0_sigma0, 1.0, c.sigma0_mu1, c.sigma0_sigma1],
            [c.mu0_mu1, c.sigma0_mu1, 1.0, c.mu1_sigma1],
            [c.mu0_sigma1, c.sigma0_sigma1, c.mu1_sigma1, 1.0],
        ]
    }
}

/// Four-variate normal law of `(mu_0, sigma_0, mu_1, sigma_1)` across regions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetaDistribution {
    pub mean: [f64; 4],
    pub sd: [f64; 4],
    pub corr: MetaCorrelations,
}

/// Latent parameters of one region in both periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionDraw {
    pub period0: NormalParams<f64>,
    pub period1: NormalParams<f64>,
}

impl RegionDraw {
    pub fn period(&self, t: usize) -> &NormalParams<f64> {
        if t == 0 {
            &self.period0
        } else {
            &self.period1
        }
    }
}

impl MetaDistribution {
    /// Zero-mean locations with the given average dispersions.
    pub fn new(sigma_means: (f64, f64), sd: [f64; 4], corr: MetaCorrelations) -> Self {
        Self { mean: [0.0, sigma_means.0, 0.0, sigma_means.1], sd, corr }
    }

    /// Smallest eigenvalue of the correlation matrix.
    pub fn min_corr_eigenvalue(&self) -> f64 {
        let m = Matrix4::from_fn(|i, j| self.corr.matrix()[i][j]);
        SymmetricEigen::new(m).eigenvalues.min()
    }

    pub fn sampler(&self) -> Result<MetaSampler> {
        MetaSampler::new(self)
    }
}

/// Precomputed factor of a [`MetaDistribution`].
#[derive(Debug, Clone)]
pub struct MetaSampler {
    mean: [f64; 4],
    active: Vec<usize>,
    /// Row-major `k x k` factor for the active coordinates.
    factor: Vec<f64>,
}

fn cholesky(a: &[f64], k: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = a[i * k + j];
            for p in 0..j {
                s -= l[i * k + p] * l[j * k + p];
            }
            if i == j {
                if s <= 1e-14 * a[i * k + i].max(f64::MIN_POSITIVE) {
                    return None;
                }
                l[i * k + i] = s.sqrt();
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    Some(l)
}

impl MetaSampler {
    pub fn new(meta: &MetaDistribution) -> Result<Self> {
        let corr = meta.corr.matrix();
        for (i, row) in corr.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
                    return Err(Error::Config(format!("correlation ({i}, {j}) = {v} outside [-1, 1]")));
                }
            }
        }
        for (i, &s) in meta.sd.iter().enumerate() {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(Error::Config(format!("meta sd {i} must be >= 0, got {s}")));
            }
            if !meta.mean[i].is_finite() {
                return Err(Error::Config(format!("meta mean {i} is not finite")));
            }
        }
        let min_eig = meta.min_corr_eigenvalue();
        if min_eig < -1e-10 {
            return Err(Error::NotPsd { eigenvalue: min_eig });
        }
        let active: Vec<usize> = (0..4).filter(|&i| meta.sd[i] > 0.0).collect();
        let k = active.len();
        let mut cov = vec![0.0; k * k];
        for (a, &i) in active.iter().enumerate() {
            for (b, &j) in active.iter().enumerate() {
                cov[a * k + b] = meta.sd[i] * meta.sd[j] * corr[i][j];
            }
        }
        let factor = match cholesky(&cov, k) {
            Some(l) => l,
            None => {
                // semidefinite: V diag(sqrt(lambda)) reproduces the covariance
                let m = nalgebra::DMatrix::from_row_slice(k, k, &cov);
                let eig = SymmetricEigen::new(m);
                let mut l = vec![0.0; k * k];
                for i in 0..k {
                    for j in 0..k {
                        l[i * k + j] = eig.eigenvectors[(i, j)] * eig.eigenvalues[j].max(0.0).sqrt();
                    }
                }
                l
            }
        };
        Ok(Self { mean: meta.mean, active, factor })
    }

    /// One raw draw of `(mu_0, sigma_0, mu_1, sigma_1)`, without the
    /// positivity screen.
    pub fn draw_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 4] {
        let k = self.active.len();
        let mut z = [0.0; 4];
        for zi in z.iter_mut().take(k) {
            *zi = StandardNormal.sample(rng);
        }
        let mut x = self.mean;
        for (a, &i) in self.active.iter().enumerate() {
            let shift: f64 = (0..k).map(|b| self.factor[a * k + b] * z[b]).sum();
            x[i] += shift;
        }
        x
    }

    /// One region, redrawing until both dispersions are positive.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<RegionDraw> {
        for _ in 0..10_000 {
            let x = self.draw_raw(rng);
            if x[1] > 0.0 && x[3] > 0.0 {
                return Ok(RegionDraw {
                    period0: NormalParams::new(x[0], x[1])?,
                    period1: NormalParams::new(x[2], x[3])?,
                });
            }
        }
        Err(Error::Config("meta-distribution almost never yields positive dispersions".into()))
    }
}

/// `count` independent regions from `meta`.
pub fn draw_region_params<R: Rng + ?Sized>(meta: &MetaDistribution, count: usize, rng: &mut R) -> Result<Vec<RegionDraw>> {
    let sampler = meta.sampler()?;
    (0..count).map(|_| sampler.draw(rng)).collect()
}

/// Cross-region law of the skilled share in the canonical model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkillShareMeta {
    pub mean: f64,
    pub sd: f64,
    pub clamp: (f64, f64),
}

impl Default for SkillShareMeta {
    fn default() -> Self {
        Self { mean: 0.224, sd: 0.047, clamp: (0.01, 0.99) }
    }
}

pub fn draw_skill_shares<R: Rng + ?Sized>(meta: &SkillShareMeta, count: usize, rng: &mut R) -> Result<Vec<f64>> {
    let (lo, hi) = meta.clamp;
    if !(lo <= hi) {
        return Err(Error::Config(format!("skill share clamp [{lo}, {hi}] is not ordered")));
    }
    if meta.sd == 0.0 {
        return Ok(vec![meta.mean.clamp(lo, hi); count]);
    }
    let law = Normal::new(meta.mean, meta.sd).map_err(|e| Error::Config(e.to_string()))?;
    Ok((0..count).map(|_| law.sample(rng).clamp(lo, hi)).collect())
}
