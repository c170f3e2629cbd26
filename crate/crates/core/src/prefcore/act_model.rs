//! Parametric evaluators of acts (state-contingent money).

use serde::{Deserialize, Serialize};

use super::root::bisect_monotone;
use super::types::Act;
use crate::error::{Error, Result};

/// Tolerance on prior sums.
const PRIOR_SUM_TOL: f64 = 1e-9;

/// Outcome transform of the smooth ambiguity model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Attitude {
    /// `f(z) = sqrt(1 + z^2)`: convex, ambiguity loving.
    #[serde(rename = "sqrt1pz2")]
    Sqrt1pz2,
    /// `f(z) = z - exp(-z)`: concave, ambiguity averse.
    #[serde(rename = "z_minus_exp")]
    ZMinusExp,
}

impl Attitude {
    pub fn f(self, z: f64) -> f64 {
        match self {
            Attitude::Sqrt1pz2 => z.hypot(1.0),
            // exp(-z) underflows to zero for large z, leaving f(z) = z
            Attitude::ZMinusExp => z - (-z).exp(),
        }
    }

    /// `f(z) - z`; decreasing in `z` for both transforms.
    pub fn excess(self, z: f64) -> f64 {
        match self {
            // rationalized to avoid cancellation for large z
            Attitude::Sqrt1pz2 => 1.0 / (z.hypot(1.0) + z),
            Attitude::ZMinusExp => -(-z).exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ActModel {
    /// Subjective expected utility `pi . x`.
    Seu { prior: Vec<f64> },
    /// Maxmin expected utility `min_k pi_k . x`.
    Meu { priors: Vec<Vec<f64>> },
    /// `sum_k weight_k f(prior_k . x)`.
    SmoothAmbiguity {
        f: Attitude,
        priors: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
    /// `(sum_i a_i x_i^rho)^(1/rho)`; homothetic.
    Ces { shares: Vec<f64>, rho: f64 },
    /// `pi . x + A tanh(x_1 - x_2) exp(-sum x)`: normalized, not homothetic,
    /// deviation from `pi . x` bounded by `A`.
    TiltedSeu { prior: Vec<f64>, amplitude: f64 },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_prior(prior: &[f64], what: &str) -> Result<()> {
    if prior.is_empty() || prior.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{what} must be a nonnegative vector"
        )));
    }
    let s: f64 = prior.iter().sum();
    if (s - 1.0).abs() > PRIOR_SUM_TOL {
        return Err(Error::InvalidParameter(format!("{what} sums to {s}")));
    }
    Ok(())
}

impl ActModel {
    pub fn dim(&self) -> usize {
        match self {
            ActModel::Seu { prior } | ActModel::TiltedSeu { prior, .. } => prior.len(),
            ActModel::Meu { priors } | ActModel::SmoothAmbiguity { priors, .. } => priors[0].len(),
            ActModel::Ces { shares, .. } => shares.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ActModel::Seu { prior } => check_prior(prior, "prior"),
            ActModel::Meu { priors } => {
                if priors.is_empty() {
                    return Err(Error::InvalidParameter("no priors".into()));
                }
                for p in priors {
                    check_prior(p, "prior")?;
                    if p.len() != priors[0].len() {
                        return Err(Error::InvalidParameter("priors differ in dimension".into()));
                    }
                }
                Ok(())
            }
            ActModel::SmoothAmbiguity {
                priors, weights, ..
            } => {
                if priors.is_empty() || priors.len() != weights.len() {
                    return Err(Error::InvalidParameter(
                        "need one weight per prior and at least one prior".into(),
                    ));
                }
                for p in priors {
                    check_prior(p, "prior")?;
                    if p.len() != priors[0].len() {
                        return Err(Error::InvalidParameter("priors differ in dimension".into()));
                    }
                }
                check_prior(weights, "prior weights")
            }
            ActModel::Ces { shares, rho } => {
                check_prior(shares, "shares")?;
                if shares.iter().any(|a| *a <= 0.0) {
                    return Err(Error::InvalidParameter("shares must be positive".into()));
                }
                if !(*rho > 0.0 && rho.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "rho {rho} must be positive"
                    )));
                }
                Ok(())
            }
            ActModel::TiltedSeu { prior, amplitude } => {
                check_prior(prior, "prior")?;
                if prior.len() < 2 {
                    return Err(Error::InvalidParameter("tilt needs two states".into()));
                }
                let cap = 0.5 * prior[0].min(prior[1]);
                if !(*amplitude >= 0.0 && *amplitude < cap) {
                    return Err(Error::InvalidParameter(format!(
                        "amplitude {amplitude} must lie in [0, {cap}) to keep the model monotone"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Raw model value.
    pub fn value(&self, x: &Act) -> f64 {
        assert_eq!(x.dim(), self.dim(), "act has the wrong number of states");
        let x = x.payoffs();
        match self {
            ActModel::Seu { prior } => dot(prior, x),
            ActModel::Meu { priors } => priors
                .iter()
                .map(|p| dot(p, x))
                .fold(f64::INFINITY, f64::min),
            ActModel::SmoothAmbiguity { f, priors, weights } => priors
                .iter()
                .zip(weights)
                .map(|(p, w)| w * f.f(dot(p, x)))
                .sum(),
            ActModel::Ces { shares, rho } => {
                let s: f64 = shares.iter().zip(x).map(|(a, xi)| a * xi.powf(*rho)).sum();
                s.powf(1.0 / rho)
            }
            ActModel::TiltedSeu { prior, amplitude } => {
                let total: f64 = x.iter().sum();
                dot(prior, x) + amplitude * (x[0] - x[1]).tanh() * (-total).exp()
            }
        }
    }

    /// Whether `value(c 1) = c` for every `c >= 0`.
    pub fn is_normalized(&self) -> bool {
        !matches!(self, ActModel::SmoothAmbiguity { .. })
    }

    /// Whether the preference is invariant under positive scaling.
    pub fn is_homothetic(&self) -> bool {
        matches!(
            self,
            ActModel::Seu { .. } | ActModel::Meu { .. } | ActModel::Ces { .. }
        )
    }

    /// `mu`-average of the priors (the prior itself for single-prior models).
    pub fn mean_prior(&self) -> Vec<f64> {
        match self {
            ActModel::Seu { prior } | ActModel::TiltedSeu { prior, .. } => prior.clone(),
            ActModel::Meu { priors } => {
                let k = priors.len() as f64;
                (0..priors[0].len())
                    .map(|i| priors.iter().map(|p| p[i]).sum::<f64>() / k)
                    .collect()
            }
            ActModel::SmoothAmbiguity {
                priors, weights, ..
            } => (0..priors[0].len())
                .map(|i| priors.iter().zip(weights).map(|(p, w)| w * p[i]).sum())
                .collect(),
            ActModel::Ces { shares, .. } => shares.clone(),
        }
    }

    /// Certainty equivalent: the `c` with `x ~ c 1`.
    ///
    /// Normalized models return their value directly (it already is the
    /// certainty equivalent); the smooth model is inverted by bisection on
    /// `[min x, max x]`, which brackets the root by monotonicity.
    pub fn certainty_equivalent(&self, x: &Act, tol: f64) -> Result<f64> {
        let lo = x.min_payoff();
        let hi = x.max_payoff();
        if lo == hi {
            return Ok(lo);
        }
        if self.is_normalized() {
            let v = self.value(x);
            // monotonicity places the value inside the payoff range
            if v < lo - tol || v > hi + tol {
                return Err(Error::NoBracket {
                    lo,
                    hi,
                    f_lo: lo - v,
                    f_hi: hi - v,
                });
            }
            return Ok(v);
        }
        let target = self.value(x);
        let dim = x.dim();
        bisect_monotone(|c| self.value(&Act::constant(dim, c)) - target, lo, hi, tol)
    }
}
