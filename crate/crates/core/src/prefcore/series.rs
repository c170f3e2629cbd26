//! Dyadic series and scaled-limit iterations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default decay factor the tail classifier demands between consecutive terms.
pub const DEFAULT_RATIO_TOL: f64 = 0.75;

/// Number of trailing terms inspected by the tail classifier.
const TAIL_WINDOW: usize = 4;

/// Terms below this fraction of `max(1, partial sum)` count as settled.
const NEGLIGIBLE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    pub sum: f64,
    /// Heuristic: the trailing terms shrink geometrically or are negligible.
    /// No finite computation proves divergence, so `false` is a diagnosis,
    /// not a proof.
    pub converged: bool,
    /// `partial_sums[n] = term(0) + ... + term(n)`.
    pub partial_sums: Vec<f64>,
}

/// `term(0) + ... + term(n_max)` with a tail-decay classification.
pub fn dyadic_tail_sum<F>(mut term: F, n_max: usize, ratio_tol: f64) -> SeriesSum
where
    F: FnMut(usize) -> f64,
{
    let terms: Vec<f64> = (0..=n_max).map(&mut term).collect();
    classify(&terms, ratio_tol)
}

pub(crate) fn classify(terms: &[f64], ratio_tol: f64) -> SeriesSum {
    let mut partial_sums = Vec::with_capacity(terms.len());
    let mut acc = 0.0;
    for t in terms {
        debug_assert!(*t >= 0.0 || t.is_nan(), "series terms must be nonnegative");
        acc += t;
        partial_sums.push(acc);
    }
    let floor = NEGLIGIBLE * acc.abs().max(1.0);
    let start = terms.len().saturating_sub(TAIL_WINDOW + 1);
    let tail = &terms[start..];
    let converged = acc.is_finite()
        && tail
            .windows(2)
            .all(|w| w[1] <= floor || w[1] <= ratio_tol * w[0]);
    SeriesSum {
        sum: acc,
        converged,
        partial_sums,
    }
}

/// Result of iterating a scaled sequence until successive values agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    /// Index of the returned iterate.
    pub n_used: usize,
    pub iterates: Vec<f64>,
}

/// Iterates `seq(0), seq(1), ...` until two consecutive increments are at
/// most `tol`. `seq` returns `None` once its argument leaves the safe numeric
/// range, which ends the iteration as not converged.
pub fn cauchy_limit<F>(mut seq: F, tol: f64, n_max: usize) -> Result<LimitEstimate>
where
    F: FnMut(usize) -> Option<Result<f64>>,
{
    let mut iterates = Vec::new();
    let mut settled = 0usize;
    for n in 0..=n_max {
        let Some(next) = seq(n) else { break };
        let next = next?;
        if let Some(prev) = iterates.last() {
            let step: f64 = next - prev;
            if step.abs() <= tol {
                settled += 1;
            } else {
                settled = 0;
            }
        }
        iterates.push(next);
        if settled >= 2 {
            return Ok(LimitEstimate {
                value: next,
                n_used: n,
                iterates,
            });
        }
    }
    let last_increments = iterates
        .windows(2)
        .rev()
        .take(TAIL_WINDOW)
        .map(|w| w[1] - w[0])
        .collect();
    Err(Error::NotConverged {
        n_max,
        last_increments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_converges_to_two() {
        let s = dyadic_tail_sum(|i| 0.5f64.powi(i as i32), 60, DEFAULT_RATIO_TOL);
        assert!((s.sum - 2.0).abs() < 1e-15);
        assert!(s.converged);
    }

    #[test]
    fn constant_terms_are_flagged_divergent() {
        let s = dyadic_tail_sum(|_| 0.2, 20, DEFAULT_RATIO_TOL);
        assert!(!s.converged);
        for (n, p) in s.partial_sums.iter().enumerate() {
            assert!((p - 0.2 * (n as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_series() {
        let s = dyadic_tail_sum(|_| 0.0, 10, DEFAULT_RATIO_TOL);
        assert_eq!(s.sum, 0.0);
        assert!(s.converged);
    }

    #[test]
    fn cauchy_limit_of_geometric_sequence() {
        let est = cauchy_limit(|n| Some(Ok(3.0 + 0.5f64.powi(n as i32))), 1e-12, 100).unwrap();
        assert!((est.value - 3.0).abs() < 1e-11);
    }

    #[test]
    fn cauchy_limit_reports_non_convergence() {
        let err = cauchy_limit(|n| Some(Ok(n as f64)), 1e-9, 10).unwrap_err();
        assert!(matches!(err, Error::NotConverged { n_max: 10, .. }));
        let err = cauchy_limit(|n| (n < 3).then_some(Ok(n as f64)), 1e-9, 10).unwrap_err();
        assert!(matches!(err, Error::NotConverged { .. }));
    }
}
