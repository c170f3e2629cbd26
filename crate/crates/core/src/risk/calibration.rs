//! Mixture-calibrated utility and its affine benchmark.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prefcore::{bisect_monotone, Lottery, RiskModel};

/// `u(p) = alpha` where `p ~ alpha * best + (1 - alpha) * worst`.
///
/// Onto `[0, 1]` with `u(best) = 1` and `u(worst) = 0`. Any monotone
/// transform of the model value yields the same `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureUtility {
    model: RiskModel,
    best: usize,
    worst: usize,
    tol: f64,
    /// `u` at each degenerate lottery.
    anchors: Vec<f64>,
}

impl MixtureUtility {
    /// Validates the model and locates the best and worst prizes (first index
    /// wins ties).
    pub fn new(model: RiskModel, tol: f64) -> Result<Self> {
        model.validate()?;
        let n = model.n_prizes();
        let values: Vec<f64> = (0..n)
            .map(|i| model.value(&Lottery::degenerate(n, i)))
            .collect();
        let mut best = 0;
        let mut worst = 0;
        for (i, v) in values.iter().enumerate() {
            if *v > values[best] {
                best = i;
            }
            if *v < values[worst] {
                worst = i;
            }
        }
        let mut u = Self {
            model,
            best,
            worst,
            tol,
            anchors: Vec::new(),
        };
        u.check_monotone_segment()?;
        u.anchors = (0..n)
            .map(|i| u.eval(&Lottery::degenerate(n, i)))
            .collect::<Result<_>>()?;
        Ok(u)
    }

    /// Spot check of the monotonicity axiom along the calibration segment.
    fn check_monotone_segment(&self) -> Result<()> {
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=64 {
            let a = k as f64 / 64.0;
            let v = self.segment_value(a);
            if v <= prev {
                return Err(Error::HypothesisFailed(format!(
                    "value is not strictly increasing along the best/worst segment near alpha = {a}"
                )));
            }
            prev = v;
        }
        Ok(())
    }

    pub fn model(&self) -> &RiskModel {
        &self.model
    }

    pub fn best(&self) -> usize {
        self.best
    }

    pub fn worst(&self) -> usize {
        self.worst
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn n_prizes(&self) -> usize {
        self.model.n_prizes()
    }

    /// `u(delta_i)` for every prize.
    pub fn anchors(&self) -> &[f64] {
        &self.anchors
    }

    /// The lottery `alpha * best + (1 - alpha) * worst`.
    pub fn segment(&self, alpha: f64) -> Lottery {
        let n = self.n_prizes();
        Lottery::degenerate(n, self.best).mix(&Lottery::degenerate(n, self.worst), alpha)
    }

    fn segment_value(&self, alpha: f64) -> f64 {
        self.model.value(&self.segment(alpha))
    }

    pub fn eval(&self, p: &Lottery) -> Result<f64> {
        let target = self.model.value(p);
        bisect_monotone(|a| self.segment_value(a) - target, 0.0, 1.0, self.tol)
    }
}

pub fn mixture_utility(model: &RiskModel, p: &Lottery, tol: f64) -> Result<f64> {
    MixtureUtility::new(model.clone(), tol)?.eval(p)
}

/// `l(p) = sum_i p_i u(delta_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineBenchmark {
    pub coefficients: Vec<f64>,
}

impl AffineBenchmark {
    pub fn from_utility(u: &MixtureUtility) -> Self {
        Self {
            coefficients: u.anchors().to_vec(),
        }
    }

    pub fn eval(&self, p: &Lottery) -> f64 {
        p.probs()
            .iter()
            .zip(&self.coefficients)
            .map(|(a, b)| a * b)
            .sum()
    }
}

pub fn build_affine_benchmark(model: &RiskModel, tol: f64) -> Result<AffineBenchmark> {
    Ok(AffineBenchmark::from_utility(&MixtureUtility::new(
        model.clone(),
        tol,
    )?))
}
