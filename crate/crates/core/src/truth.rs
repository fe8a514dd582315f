//! True average causal effects from the structural model.
//!
//! `ATE_0` evaluates the policy change at period-0 primitives, `ATE_1` at
//! period-1 primitives, and the reported effect is their average. Quantile
//! gaps are differenced region by region before averaging.

use crate::dgp::WageModel;
use crate::error::Result;
use crate::estimators::{Outcome, WageQuantile};
use crate::prob::MixedWageDistribution;
use crate::scalar::Real;

/// Employment and the four tracked wage quantiles of one distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables<T> {
    pub employment: T,
    pub quantiles: [T; 4],
}

impl<T: Real> Observables<T> {
    pub fn from_distribution(dist: &MixedWageDistribution<T>) -> Result<Self> {
        let mut quantiles = [T::zero(); 4];
        for q in WageQuantile::ALL {
            quantiles[q.index()] = dist.quantile(T::lit(q.level()))?;
        }
        Ok(Self { employment: dist.employment(), quantiles })
    }

    pub fn value(&self, outcome: Outcome) -> T {
        outcome.value(self.employment, &self.quantiles)
    }
}

/// A region's minimum wage in the two periods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyPath<T> {
    pub mw0: T,
    pub mw1: T,
}

/// All four potential distributions of one region: `at[θ period][mw period]`.
#[derive(Debug, Clone)]
pub struct RegionEvaluation<T> {
    pub at: [[MixedWageDistribution<T>; 2]; 2],
    pub observed: [[Observables<T>; 2]; 2],
}

impl<T: Real> RegionEvaluation<T> {
    /// Observed distribution in period `t`: primitives and minimum of the same period.
    pub fn realized(&self, t: usize) -> &MixedWageDistribution<T> {
        &self.at[t][t]
    }

    pub fn realized_observables(&self, t: usize) -> &Observables<T> {
        &self.observed[t][t]
    }

    /// `(f(mw1, θ_t) - f(mw0, θ_t))` for `t = 0, 1`.
    pub fn effects(&self, outcome: Outcome) -> (T, T) {
        let d = |t: usize| self.observed[t][1].value(outcome) - self.observed[t][0].value(outcome);
        (d(0), d(1))
    }
}

fn evaluate_at<T: Real, M: WageModel<T>>(model: &M, theta: &M::Region, path: &PolicyPath<T>) -> Result<[MixedWageDistribution<T>; 2]> {
    let d0 = model.distribution(theta, path.mw0)?;
    let d1 = if path.mw1 == path.mw0 { d0.clone() } else { model.distribution(theta, path.mw1)? };
    Ok([d0, d1])
}

/// Evaluate one region at both primitives and both minima; identical
/// primitives are evaluated once.
pub fn evaluate_region<T, M>(model: &M, theta: (&M::Region, &M::Region), path: &PolicyPath<T>) -> Result<RegionEvaluation<T>>
where
    T: Real,
    M: WageModel<T>,
    M::Region: PartialEq,
{
    let first = evaluate_at(model, theta.0, path)?;
    let second = if theta.0 == theta.1 { first.clone() } else { evaluate_at(model, theta.1, path)? };
    let obs = |d: &[MixedWageDistribution<T>; 2]| -> Result<[Observables<T>; 2]> {
        let o0 = Observables::from_distribution(&d[0])?;
        let o1 = if path.mw1 == path.mw0 { o0 } else { Observables::from_distribution(&d[1])? };
        Ok([o0, o1])
    };
    let o_first = obs(&first)?;
    let o_second = if theta.0 == theta.1 { o_first } else { obs(&second)? };
    Ok(RegionEvaluation { at: [first, second], observed: [o_first, o_second] })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AteReport<T> {
    pub outcomes: Vec<Outcome>,
    pub ate0: Vec<T>,
    pub ate1: Vec<T>,
}

impl<T: Real> AteReport<T> {
    pub fn ate(&self, i: usize) -> T {
        (self.ate0[i] + self.ate1[i]) * T::lit(0.5)
    }

    pub fn ates(&self) -> Vec<T> {
        (0..self.outcomes.len()).map(|i| self.ate(i)).collect()
    }

    pub fn get(&self, outcome: Outcome) -> Option<T> {
        self.outcomes.iter().position(|&o| o == outcome).map(|i| self.ate(i))
    }

    pub fn from_evaluations(evaluations: &[RegionEvaluation<T>], outcomes: &[Outcome]) -> Self {
        let n = T::from_usize_lossy(evaluations.len().max(1));
        let mut ate0 = Vec::with_capacity(outcomes.len());
        let mut ate1 = Vec::with_capacity(outcomes.len());
        for &o in outcomes {
            let (mut s0, mut s1) = (T::zero(), T::zero());
            for e in evaluations {
                let (d0, d1) = e.effects(o);
                s0 = s0 + d0;
                s1 = s1 + d1;
            }
            ate0.push(s0 / n);
            ate1.push(s1 / n);
        }
        Self { outcomes: outcomes.to_vec(), ate0, ate1 }
    }
}

/// True effects of moving each region from `mw0` to `mw1`, given its period-0
/// and period-1 primitives.
pub fn true_ate<T, M>(model: &M, regions: &[(M::Region, M::Region)], paths: &[PolicyPath<T>], outcomes: &[Outcome]) -> Result<AteReport<T>>
where
    T: Real,
    M: WageModel<T>,
    M::Region: PartialEq,
{
    if regions.len() != paths.len() {
        return Err(crate::error::Error::Config(format!("{} regions but {} policy paths", regions.len(), paths.len())));
    }
    let evaluations = regions
        .iter()
        .zip(paths)
        .enumerate()
        .map(|(r, ((a, b), path))| evaluate_region(model, (a, b), path).map_err(|e| e.with_region(r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AteReport::from_evaluations(&evaluations, outcomes))
}
