use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability vector over a finite prize set.
///
/// Entries are nonnegative and sum to one. Inputs whose sum is off by at
/// most [`Lottery::SUM_TOLERANCE`] are renormalized; anything further off is
/// rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Lottery {
    probs: Vec<f64>,
}

impl Lottery {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidLottery("no prizes".into()));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidLottery(format!(
                "entry {bad} is not a probability"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::InvalidLottery(format!("entries sum to {sum}")));
        }
        let probs = if sum == 1.0 {
            probs
        } else {
            probs.into_iter().map(|p| p / sum).collect()
        };
        Ok(Self { probs })
    }

    /// Point mass on prize `index`.
    pub fn degenerate(n_prizes: usize, index: usize) -> Self {
        assert!(index < n_prizes, "prize {index} out of range");
        let mut probs = vec![0.0; n_prizes];
        probs[index] = 1.0;
        Self { probs }
    }

    pub fn uniform(n_prizes: usize) -> Self {
        Self {
            probs: vec![1.0 / n_prizes as f64; n_prizes],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn n_prizes(&self) -> usize {
        self.probs.len()
    }

    /// Number of prizes with strictly positive probability.
    pub fn support(&self) -> usize {
        self.probs.iter().filter(|p| **p > 0.0).count()
    }

    pub fn is_degenerate(&self) -> bool {
        self.support() == 1
    }

    /// `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &Lottery, weight: f64) -> Lottery {
        assert_eq!(self.n_prizes(), other.n_prizes(), "prize sets differ");
        debug_assert!((0.0..=1.0).contains(&weight));
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (weight * a + (1.0 - weight) * b).max(0.0))
            .collect();
        Self::from_raw(probs)
    }

    /// Mixture of several lotteries with weights summing to one.
    pub fn combine(parts: &[(f64, &Lottery)]) -> Lottery {
        let n = parts[0].1.n_prizes();
        let mut probs = vec![0.0; n];
        for (w, l) in parts {
            for (acc, p) in probs.iter_mut().zip(l.probs()) {
                *acc += w * p;
            }
        }
        Self::from_raw(probs.into_iter().map(|p| p.max(0.0)).collect())
    }

    /// Renormalizes a nonnegative vector produced by exact convex arithmetic.
    pub(crate) fn from_raw(probs: Vec<f64>) -> Lottery {
        let sum: f64 = probs.iter().sum();
        debug_assert!((sum - 1.0).abs() < 1e-9, "mixture sums to {sum}");
        if sum == 1.0 {
            Self { probs }
        } else {
            Self {
                probs: probs.into_iter().map(|p| p / sum).collect(),
            }
        }
    }
}

impl TryFrom<Vec<f64>> for Lottery {
    type Error = Error;
    fn try_from(value: Vec<f64>) -> Result<Self> {
        Lottery::new(value)
    }
}

impl From<Lottery> for Vec<f64> {
    fn from(value: Lottery) -> Self {
        value.probs
    }
}

/// State-contingent monetary payment in `R^d_+`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Act {
    payoffs: Vec<f64>,
}

impl Act {
    pub fn new(payoffs: Vec<f64>) -> Result<Self> {
        if payoffs.is_empty() {
            return Err(Error::InvalidAct("no states".into()));
        }
        if let Some(bad) = payoffs.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidAct(format!("payoff {bad} outside R_+")));
        }
        Ok(Self { payoffs })
    }

    /// The act paying `c` in every state.
    pub fn constant(dim: usize, c: f64) -> Self {
        assert!(c >= 0.0 && c.is_finite());
        Self {
            payoffs: vec![c; dim],
        }
    }

    /// Unit act `e_i`.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut payoffs = vec![0.0; dim];
        payoffs[index] = 1.0;
        Self { payoffs }
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    pub fn dim(&self) -> usize {
        self.payoffs.len()
    }

    pub fn max_payoff(&self) -> f64 {
        self.payoffs.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_payoff(&self) -> f64 {
        self.payoffs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn scale(&self, factor: f64) -> Act {
        debug_assert!(factor >= 0.0);
        Self {
            payoffs: self.payoffs.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn add(&self, other: &Act) -> Act {
        assert_eq!(self.dim(), other.dim());
        Self {
            payoffs: self
                .payoffs
                .iter()
                .zip(&other.payoffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &Act, weight: f64) -> Act {
        assert_eq!(self.dim(), other.dim());
        Self {
            payoffs: self
                .payoffs
                .iter()
                .zip(&other.payoffs)
                .map(|(a, b)| (weight * a + (1.0 - weight) * b).max(0.0))
                .collect(),
        }
    }

    pub fn midpoint(&self, other: &Act) -> Act {
        assert_eq!(self.dim(), other.dim());
        Self {
            payoffs: self
                .payoffs
                .iter()
                .zip(&other.payoffs)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        }
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &Act) -> bool {
        self.payoffs.iter().zip(&other.payoffs).all(|(a, b)| a <= b)
    }
}

impl TryFrom<Vec<f64>> for Act {
    type Error = Error;
    fn try_from(value: Vec<f64>) -> Result<Self> {
        Act::new(value)
    }
}

impl From<Act> for Vec<f64> {
    fn from(value: Act) -> Self {
        value.payoffs
    }
}

/// Amount of money delivered at a date.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatedReward {
    pub amount: f64,
    pub time: f64,
}

impl DatedReward {
    pub fn new(amount: f64, time: f64) -> Result<Self> {
        if !(time >= 0.0 && time.is_finite()) || !amount.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dated reward ({amount}, {time})"
            )));
        }
        Ok(Self { amount, time })
    }
}
