//! Discount-factor and continuous-time evaluators of dated rewards.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discrete-time discounting, `(X, t) >= (Y, s)` iff `X d(t) >= Y d(s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DiscountModel {
    /// `d(t) = gamma^t`.
    Exponential { gamma: f64 },
    /// `d(0) = 1`, `d(t) = beta delta^t` for `t >= 1`.
    QuasiHyperbolic { beta: f64, delta: f64 },
    /// `d(t) = 1 / (1 + k t)`.
    Hyperbolic { k: f64 },
    /// `d(0), ..., d(T)` with `d(0) = 1`.
    Tabulated { values: Vec<f64> },
    /// `d(t) = gamma^t exp(a sin t)`: exponential up to a bounded factor.
    PerturbedExponential { gamma: f64, amplitude: f64 },
}

impl DiscountModel {
    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64, name: &str| {
            if x > 0.0 && x < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} = {x} must lie in (0, 1)"
                )))
            }
        };
        match self {
            DiscountModel::Exponential { gamma } => unit(*gamma, "gamma"),
            DiscountModel::QuasiHyperbolic { beta, delta } => {
                if !(*beta > 0.0 && *beta <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "beta = {beta} must lie in (0, 1]"
                    )));
                }
                unit(*delta, "delta")
            }
            DiscountModel::Hyperbolic { k } => {
                if *k > 0.0 && k.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("k = {k} must be positive")))
                }
            }
            DiscountModel::Tabulated { values } => {
                if values.first() != Some(&1.0) {
                    return Err(Error::InvalidParameter(
                        "tabulated discount must start at d(0) = 1".into(),
                    ));
                }
                if values.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
                    return Err(Error::InvalidParameter(
                        "discount factors must be positive".into(),
                    ));
                }
                Ok(())
            }
            DiscountModel::PerturbedExponential { gamma, amplitude } => {
                if !amplitude.is_finite() {
                    return Err(Error::InvalidParameter("amplitude must be finite".into()));
                }
                unit(*gamma, "gamma")
            }
        }
    }

    /// Largest date the model can evaluate, `None` when unbounded.
    pub fn horizon(&self) -> Option<usize> {
        match self {
            DiscountModel::Tabulated { values } => Some(values.len() - 1),
            _ => None,
        }
    }

    /// `log d(t)`, computed without forming `d(t)` where a closed form exists
    /// so that long horizons do not underflow.
    pub fn log_discount(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::InvalidParameter(format!("negative date {t}")));
        }
        Ok(match self {
            DiscountModel::Exponential { gamma } => t * gamma.ln(),
            DiscountModel::QuasiHyperbolic { beta, delta } => {
                if t == 0.0 {
                    0.0
                } else {
                    beta.ln() + t * delta.ln()
                }
            }
            DiscountModel::Hyperbolic { k } => -(k * t).ln_1p(),
            DiscountModel::Tabulated { values } => {
                let horizon = values.len() - 1;
                if t.fract() != 0.0 || t > horizon as f64 {
                    return Err(Error::OutsideHorizon { t, horizon });
                }
                values[t as usize].ln()
            }
            DiscountModel::PerturbedExponential { gamma, amplitude } => {
                t * gamma.ln() + amplitude * t.sin()
            }
        })
    }

    pub fn discount(&self, t: f64) -> Result<f64> {
        self.log_discount(t).map(f64::exp)
    }
}

/// Utility of log-money `x <= x_bar` received after delay `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ContinuousTimeModel {
    /// `u(x, t) = x - rate t`.
    LinearDelay { rate: f64, x_bar: f64 },
    /// `u(x, t) = x - ln(1 + k t)`.
    LogDelay { k: f64, x_bar: f64 },
}

impl ContinuousTimeModel {
    pub fn x_bar(&self) -> f64 {
        match *self {
            ContinuousTimeModel::LinearDelay { x_bar, .. }
            | ContinuousTimeModel::LogDelay { x_bar, .. } => x_bar,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (p, name) = match *self {
            ContinuousTimeModel::LinearDelay { rate, .. } => (rate, "rate"),
            ContinuousTimeModel::LogDelay { k, .. } => (k, "k"),
        };
        if !(p > 0.0 && p.is_finite()) || !self.x_bar().is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{name} = {p} must be positive"
            )));
        }
        Ok(())
    }

    pub fn utility(&self, x: f64, t: f64) -> f64 {
        match *self {
            ContinuousTimeModel::LinearDelay { rate, .. } => x - rate * t,
            ContinuousTimeModel::LogDelay { k, .. } => x - (k * t).ln_1p(),
        }
    }
}
