//! Utility scales on acts and the sample designs used by the meters.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::prefcore::{Act, ActModel, Sampler, Space, DEFAULT_TOL};

/// A real-valued evaluation of acts.
pub trait ActUtility: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &Act) -> Result<f64>;
    /// Accuracy of one evaluation.
    fn tol(&self) -> f64 {
        0.0
    }
}

/// Normalized representation: `u(x) = c` with `x ~ c 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CeUtility {
    pub model: ActModel,
    pub tol: f64,
}

impl CeUtility {
    pub fn new(model: ActModel, tol: f64) -> Result<Self> {
        model.validate()?;
        Ok(Self { model, tol })
    }
}

impl ActUtility for CeUtility {
    fn dim(&self) -> usize {
        self.model.dim()
    }

    fn eval(&self, x: &Act) -> Result<f64> {
        self.model.certainty_equivalent(x, self.tol)
    }

    fn tol(&self) -> f64 {
        self.tol
    }
}

/// The model's own formula, e.g. `sum_k w_k f(p_k . x)` for the smooth
/// model. Not normalized in general: `u(0) = f(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralUtility {
    pub model: ActModel,
}

impl IntegralUtility {
    pub fn new(model: ActModel) -> Result<Self> {
        model.validate()?;
        Ok(Self { model })
    }
}

impl ActUtility for IntegralUtility {
    fn dim(&self) -> usize {
        self.model.dim()
    }

    fn eval(&self, x: &Act) -> Result<f64> {
        Ok(self.model.value(x))
    }
}

pub fn ce_utility(model: &ActModel, x: &Act, tol: f64) -> Result<f64> {
    model.certainty_equivalent(x, tol)
}

/// Sample design over the box `[0, bound]^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActSampler {
    pub bound: f64,
    /// Points per axis of the verification grid.
    pub resolution: usize,
    /// Points per axis of the coarser grid whose pairs are all probed.
    pub pair_resolution: usize,
    /// Mixture weights `k / lambda_resolution`, `0 < k < lambda_resolution`.
    pub lambda_resolution: usize,
    #[serde(default)]
    pub random_pairs: usize,
    #[serde(default)]
    pub seed: u64,
}

impl ActSampler {
    pub fn new(bound: f64, resolution: usize) -> Self {
        Self {
            bound,
            resolution,
            pair_resolution: 5,
            lambda_resolution: 4,
            random_pairs: 0,
            seed: 0,
        }
    }

    pub fn points(&self, dim: usize) -> Vec<Act> {
        to_acts(Sampler::new(self.resolution).points(&self.space(dim)))
    }

    pub fn coarse_points(&self, dim: usize) -> Vec<Act> {
        to_acts(Sampler::new(self.pair_resolution).points(&self.space(dim)))
    }

    pub fn lambdas(&self) -> Vec<f64> {
        (1..self.lambda_resolution)
            .map(|k| k as f64 / self.lambda_resolution as f64)
            .collect()
    }

    /// All pairs of coarse points (unordered, distinct) plus seeded random
    /// pairs in the box.
    pub fn coarse_pairs(&self, dim: usize) -> Vec<(Act, Act)> {
        let coarse = self.coarse_points(dim);
        let mut out = Vec::new();
        for (i, x) in coarse.iter().enumerate() {
            for y in &coarse[i + 1..] {
                out.push((x.clone(), y.clone()));
            }
        }
        out.extend(self.random_pairs(dim));
        out
    }

    fn random_pairs(&self, dim: usize) -> Vec<(Act, Act)> {
        if self.random_pairs == 0 {
            return Vec::new();
        }
        let n = 2 * self.random_pairs;
        let pts = Sampler::new(2)
            .with_random(n, self.seed)
            .points(&self.space(dim));
        let skip = pts.len() - n;
        let acts = to_acts(pts.into_iter().skip(skip).collect());
        acts.chunks(2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect()
    }

    fn space(&self, dim: usize) -> Space {
        Space::Box {
            dim,
            bound: self.bound,
        }
    }
}

fn to_acts(points: Vec<Vec<f64>>) -> Vec<Act> {
    points
        .into_iter()
        .map(|p| Act::new(p).expect("box points are nonnegative"))
        .collect()
}

/// Default accuracy of certainty-equivalent evaluations.
pub const CE_TOL: f64 = DEFAULT_TOL;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certainty_equivalent_of_seu_is_expectation() {
        let u = CeUtility::new(
            ActModel::Seu {
                prior: vec![0.25, 0.75],
            },
            CE_TOL,
        )
        .unwrap();
        let x = Act::new(vec![4.0, 8.0]).unwrap();
        assert_eq!(u.eval(&x).unwrap(), 7.0);
    }

    #[test]
    fn sampler_contains_origin_and_far_corner() {
        let s = ActSampler::new(10.0, 5);
        let pts = s.points(2);
        assert!(pts.contains(&Act::constant(2, 0.0)));
        assert!(pts.contains(&Act::constant(2, 10.0)));
        assert_eq!(s.lambdas(), vec![0.25, 0.5, 0.75]);
    }
}
