//! Parametric evaluators of lotteries.

use serde::{Deserialize, Serialize};

use super::grid::{simplex_compositions, simplex_lattice};
use super::types::Lottery;
use crate::error::{Error, Result};

/// Power value function `x^a` on nonnegative money.
pub fn power_value(x: f64, exponent: f64) -> f64 {
    x.powf(exponent)
}

/// Inverse-S probability weighting `p^b / (p^b + (1-p)^b)^(1/b)`.
///
/// `g(0) = 0` and `g(1) = 1` hold exactly.
pub fn tk_weight(p: f64, b: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let pb = p.powf(b);
    pb / (pb + (1.0 - p).powf(b)).powf(1.0 / b)
}

/// Below this exponent the weighting function stops being monotone.
const MIN_WEIGHT_EXPONENT: f64 = 0.28;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RiskModel {
    /// `sum_i p_i u_i`.
    ExpectedUtility { utilities: Vec<f64> },
    /// Cumulative prospect theory with power value and inverse-S weighting.
    ///
    /// Outcomes are ranked by value, best first; the `i`-th ranked outcome gets
    /// decision weight `g(G_i) - g(G_{i-1})` where `G_i` is the probability of
    /// the top `i` outcomes. On two-outcome lotteries this is
    /// `g(p) w(x) + (1 - g(p)) w(z)`.
    Cpt {
        prizes: Vec<f64>,
        value_exponent: f64,
        weight_exponent: f64,
    },
    /// Values on a simplex lattice, interpolated piecewise linearly.
    Tabulated(SimplexTable),
}

impl RiskModel {
    /// The two-parameter weighting model with the classic 0.54 / 0.74 fit.
    pub fn wu_gonzalez(prizes: Vec<f64>) -> Self {
        RiskModel::Cpt {
            prizes,
            value_exponent: 0.54,
            weight_exponent: 0.74,
        }
    }

    pub fn n_prizes(&self) -> usize {
        match self {
            RiskModel::ExpectedUtility { utilities } => utilities.len(),
            RiskModel::Cpt { prizes, .. } => prizes.len(),
            RiskModel::Tabulated(t) => t.n_prizes,
        }
    }

    /// Checks parameters plus extremality: the best and the worst degenerate
    /// lotteries must be strictly ranked.
    pub fn validate(&self) -> Result<()> {
        match self {
            RiskModel::ExpectedUtility { utilities } => {
                if utilities.len() < 2 || utilities.iter().any(|u| !u.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "expected utility needs at least two finite prize utilities".into(),
                    ));
                }
            }
            RiskModel::Cpt {
                prizes,
                value_exponent,
                weight_exponent,
            } => {
                if prizes.len() < 2 || prizes.iter().any(|x| !x.is_finite() || *x < 0.0) {
                    return Err(Error::InvalidParameter(
                        "prizes must be at least two nonnegative amounts".into(),
                    ));
                }
                if !(*value_exponent > 0.0 && value_exponent.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "value exponent {value_exponent} must be positive"
                    )));
                }
                if !(MIN_WEIGHT_EXPONENT..=1.0).contains(weight_exponent) {
                    return Err(Error::InvalidParameter(format!(
                        "weighting exponent {weight_exponent} outside [{MIN_WEIGHT_EXPONENT}, 1]"
                    )));
                }
            }
            RiskModel::Tabulated(t) => t.validate()?,
        }
        let vals: Vec<f64> = (0..self.n_prizes())
            .map(|i| self.value(&Lottery::degenerate(self.n_prizes(), i)))
            .collect();
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        if hi <= lo {
            return Err(Error::HypothesisFailed(
                "all degenerate lotteries are indifferent; no strict best and worst prize".into(),
            ));
        }
        Ok(())
    }

    pub fn value(&self, p: &Lottery) -> f64 {
        assert_eq!(
            p.n_prizes(),
            self.n_prizes(),
            "lottery has the wrong number of prizes"
        );
        match self {
            RiskModel::ExpectedUtility { utilities } => p
                .probs()
                .iter()
                .zip(utilities)
                .map(|(pi, ui)| pi * ui)
                .sum(),
            RiskModel::Cpt {
                prizes,
                value_exponent,
                weight_exponent,
            } => cpt_value(p.probs(), prizes, *value_exponent, *weight_exponent),
            RiskModel::Tabulated(t) => t.eval(p.probs()),
        }
    }
}

fn cpt_value(probs: &[f64], prizes: &[f64], a: f64, b: f64) -> f64 {
    let values: Vec<f64> = prizes.iter().map(|x| power_value(*x, a)).collect();
    let mut order: Vec<usize> = (0..prizes.len()).collect();
    // stable: equal values keep prize order
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let last_positive = order.iter().rposition(|&i| probs[i] > 0.0);
    let mut cumulative = 0.0;
    let mut g_prev = 0.0;
    let mut total = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        if probs[i] == 0.0 {
            continue;
        }
        cumulative += probs[i];
        // the final outcome closes the distribution exactly
        let g = if Some(rank) == last_positive {
            1.0
        } else {
            tk_weight(cumulative.min(1.0), b)
        };
        total += (g - g_prev) * values[i];
        g_prev = g;
    }
    total
}

/// Values of a function on the lattice `{k / resolution}` of the simplex.
///
/// Off-lattice lotteries are evaluated by the Kuhn (Freudenthal)
/// triangulation in cumulative coordinates, which reproduces affine
/// functions exactly and keeps the table continuous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexTable {
    pub n_prizes: usize,
    pub resolution: usize,
    /// One value per lattice point, in [`simplex_lattice`] order.
    pub values: Vec<f64>,
}

/// Distance to an integer below which a cumulative coordinate is snapped.
const SNAP: f64 = 1e-9;

impl SimplexTable {
    pub fn tabulate<F>(n_prizes: usize, resolution: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64,
    {
        let values = simplex_lattice(n_prizes, resolution)
            .iter()
            .map(|p| f(p))
            .collect();
        Self {
            n_prizes,
            resolution,
            values,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_prizes < 2 || self.resolution < 1 {
            return Err(Error::InvalidParameter(
                "table needs two prizes and resolution >= 1".into(),
            ));
        }
        let expected = simplex_compositions(self.n_prizes, self.resolution).len();
        if self.values.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "table has {} values, lattice has {expected} points",
                self.values.len()
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "table values must be finite".into(),
            ));
        }
        Ok(())
    }

    /// Value at the lattice point with integer composition `k`.
    pub fn at(&self, k: &[usize]) -> f64 {
        self.values[composition_rank(k, self.resolution)]
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        let n = self.n_prizes;
        let r = self.resolution;
        let rf = r as f64;
        // cumulative coordinates c_1 <= ... <= c_{n-1} in [0, r]
        let mut c = Vec::with_capacity(n - 1);
        let mut acc = 0.0;
        for pi in &p[..n - 1] {
            acc += pi;
            let mut ci = (acc * rf).clamp(0.0, rf);
            if let Some(prev) = c.last() {
                ci = f64::max(ci, *prev);
            }
            let nearest = ci.round();
            if (ci - nearest).abs() <= SNAP {
                ci = nearest;
            }
            c.push(ci);
        }
        let base: Vec<usize> = c.iter().map(|ci| ci.floor() as usize).collect();
        let frac: Vec<f64> = c.iter().zip(&base).map(|(ci, b)| ci - *b as f64).collect();
        let mut order: Vec<usize> = (0..n - 1).collect();
        // larger fraction first; ties go to the larger index to stay monotone
        order.sort_by(|&i, &j| frac[j].total_cmp(&frac[i]).then(j.cmp(&i)));

        let mut vertex = base;
        let mut total = 0.0;
        let mut upper = 1.0;
        for step in 0..=order.len() {
            let next = if step < order.len() {
                frac[order[step]]
            } else {
                0.0
            };
            let weight = upper - next;
            if weight > 0.0 {
                total += weight * self.at(&cumulative_to_composition(&vertex, r));
            }
            if step < order.len() {
                vertex[order[step]] += 1;
                upper = next;
            }
        }
        total
    }
}

fn cumulative_to_composition(cum: &[usize], resolution: usize) -> Vec<usize> {
    let mut k = Vec::with_capacity(cum.len() + 1);
    let mut prev = 0;
    for &ci in cum {
        k.push(ci - prev);
        prev = ci;
    }
    k.push(resolution - prev);
    k
}

/// Number of compositions of `m` into `parts` nonnegative parts.
fn n_compositions(m: usize, parts: usize) -> usize {
    if parts == 0 {
        return usize::from(m == 0);
    }
    // C(m + parts - 1, parts - 1)
    let k = parts - 1;
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (m + k - i) / (i + 1);
    }
    acc
}

/// Index of composition `k` in lexicographically descending order.
fn composition_rank(k: &[usize], resolution: usize) -> usize {
    let mut rank = 0;
    let mut remaining = resolution;
    for (i, &ki) in k.iter().enumerate().take(k.len() - 1) {
        let rest = k.len() - i - 1;
        for larger in ki + 1..=remaining {
            rank += n_compositions(remaining - larger, rest);
        }
        remaining -= ki;
    }
    rank
}
