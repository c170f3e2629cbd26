//! Discrete-time discounting: stationarity defects, the nearby exponential
//! discount factor, and exact recovery for strictly decreasing curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prefcore::report::ArgMax;
use crate::prefcore::series::classify;
use crate::prefcore::{
    cauchy_limit, Cell, DiscountModel, NearRepresentation, RepresentationKind, SeriesSum, Table,
    ViolationReport, Witness, BOUND_SLACK, DEFAULT_RATIO_TOL,
};

/// Fitted factors within this distance of one are flagged as degenerate.
pub const DEGENERATE_GAMMA_TOL: f64 = 1e-9;

/// Tolerance of the exactness flag in [`exact_recovery`].
pub const EXACTNESS_TOL: f64 = 1e-9;

/// A discount model together with the horizon `T` of the dates probed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscountCurve {
    pub model: DiscountModel,
    pub horizon: usize,
}

impl DiscountCurve {
    /// Tabulated models are capped at their own horizon.
    pub fn new(model: DiscountModel, horizon: usize) -> Result<Self> {
        model.validate()?;
        let horizon = model.horizon().map_or(horizon, |h| h.min(horizon));
        Ok(Self { model, horizon })
    }

    /// `log d(t)`. Closed-form models evaluate beyond the horizon.
    pub fn log_d(&self, t: u64) -> Result<f64> {
        self.model.log_discount(t as f64)
    }

    pub fn d(&self, t: u64) -> Result<f64> {
        self.log_d(t).map(f64::exp)
    }

    /// `d(0), ..., d(T)`.
    pub fn values(&self) -> Result<Vec<f64>> {
        (0..=self.horizon as u64).map(|t| self.d(t)).collect()
    }

    pub fn is_strictly_decreasing(&self) -> Result<bool> {
        Ok(self.values()?.windows(2).all(|w| w[1] < w[0]))
    }
}

/// `delta_X(s, t)` read off the two indifferences `(X, t) ~ (Y, s + t)` and
/// `(X, 0) ~ (Y delta, s)`. Equal to `d(s + t) / (d(s) d(t))` for every
/// anchor `X > 0`; the anchor is kept to mirror the axiom.
pub fn stationarity_ratio(curve: &DiscountCurve, anchor: f64, s: u64, t: u64) -> Result<f64> {
    if !(anchor > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "anchor must be positive, got {anchor}"
        )));
    }
    let y = anchor * curve.d(t)? / curve.d(s + t)?;
    Ok(anchor / (y * curve.d(s)?))
}

/// `|log d(s + t) - log d(s) - log d(t)|`, computed in log space.
pub fn psi(curve: &DiscountCurve, s: u64, t: u64) -> Result<f64> {
    let (ls, lt, lst) = (curve.log_d(s)?, curve.log_d(t)?, curve.log_d(s + t)?);
    // Summing the two smaller-index logs first keeps psi(s, t) == psi(t, s).
    let (a, b) = if s <= t { (ls, lt) } else { (lt, ls) };
    Ok((lst - (a + b)).abs())
}

/// `sum_{i=0}^{n} 2^-(i+1) psi(2^i t, 2^i t)` up to `n_max`, stopping where
/// `2^(i+1) t` leaves a tabulated horizon.
pub fn theta_series(curve: &DiscountCurve, t: u64, n_max: usize) -> Result<SeriesSum> {
    let mut terms = Vec::new();
    for i in 0..=n_max.min(62) {
        let ti = t << i;
        if ti.checked_mul(2).is_none() {
            break;
        }
        if curve.model.horizon().is_some_and(|h| 2 * ti > h as u64) {
            break;
        }
        terms.push(psi(curve, ti, ti)? / (2.0f64).powi(i as i32 + 1));
    }
    Ok(classify(&terms, DEFAULT_RATIO_TOL))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeThetaReport {
    pub report: ViolationReport,
    pub converged: bool,
    pub witness_partial_sums: Vec<f64>,
    /// Largest `2^-n psi(2^n t, 2^n t)` at the last term of each series;
    /// the limit condition the Cauchy step also needs.
    pub limit_diagnostic: f64,
}

/// Maximum of [`theta_series`] over `dates`.
pub fn theta_estimate(
    curve: &DiscountCurve,
    dates: &[u64],
    n_max: usize,
) -> Result<TimeThetaReport> {
    let mut best = ArgMax::new();
    let mut converged = true;
    let mut diag = 0.0f64;
    let mut sums = Vec::with_capacity(dates.len());
    for (k, &t) in dates.iter().enumerate() {
        let s = theta_series(curve, t, n_max)?;
        converged &= s.converged;
        let n = s.partial_sums.len();
        if n >= 1 {
            let last = s.partial_sums[n - 1] - if n >= 2 { s.partial_sums[n - 2] } else { 0.0 };
            diag = diag.max(2.0 * last);
        }
        best.push(s.sum, || k);
        sums.push(s);
    }
    let (witness, partial) = match best.witness {
        Some(k) => (
            Witness::Dates {
                s: dates[k] as f64,
                t: dates[k] as f64,
            },
            sums[k].partial_sums.clone(),
        ),
        None => (Witness::None, Vec::new()),
    };
    Ok(TimeThetaReport {
        report: ViolationReport {
            parameter: "theta".into(),
            value: best.value_or(0.0),
            witness,
            samples_evaluated: dates.len(),
            tolerance: 0.0,
        },
        converged,
        witness_partial_sums: partial,
        limit_diagnostic: diag,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaFit {
    pub gamma: f64,
    pub n_used: usize,
    /// `gamma` is one to within [`DEGENERATE_GAMMA_TOL`]: the exponential
    /// benchmark does not discount at all.
    pub degenerate: bool,
    pub iterates: Vec<f64>,
}

/// `gamma = exp(lim 2^-n log d(2^n))`.
pub fn fit_gamma(curve: &DiscountCurve, n_max: usize, tol: f64) -> Result<GammaFit> {
    let est = cauchy_limit(
        |n| {
            if n > 62 {
                return None;
            }
            let t = 1u64 << n;
            if curve.model.horizon().is_some_and(|h| t > h as u64) {
                return None;
            }
            Some(curve.log_d(t).map(|l| l / t as f64))
        },
        tol,
        n_max,
    )?;
    let gamma = est.value.exp();
    Ok(GammaFit {
        gamma,
        n_used: est.n_used,
        degenerate: (1.0 - gamma).abs() <= DEGENERATE_GAMMA_TOL,
        iterates: est.iterates,
    })
}

/// `max_t |log d(t) - t log gamma|` over `dates`, checked against `theta`.
pub fn verify_exp_bound(
    curve: &DiscountCurve,
    gamma: f64,
    theta: f64,
    dates: &[u64],
) -> Result<NearRepresentation> {
    let lg = gamma.ln();
    let mut worst = ArgMax::new();
    for &t in dates {
        let defect = (curve.log_d(t)? - t as f64 * lg).abs();
        worst.push(defect, || t);
    }
    let distance = worst.value_or(0.0);
    let witness = worst.witness.map(|t| vec![t as f64]).unwrap_or_default();
    if distance > theta + BOUND_SLACK {
        return Err(Error::BoundViolated {
            distance,
            bound: theta,
            witness,
        });
    }
    Ok(NearRepresentation {
        kind: RepresentationKind::ExponentialDiscount,
        parameters: vec![gamma],
        achieved_distance: distance,
        bound: theta,
        witness,
        points_checked: dates.len(),
    })
}

/// `W` solving `(Z / Y - 1, 0) ~ (W, s + t)` where `(X, t) ~ (Y, t + s)` and
/// `(X, 0) ~ (Z, s)`. Equals `f(s) f(t) - f(s + t)` with `f = 1 / d` for
/// every anchor `X > 0`.
pub fn w_defect(curve: &DiscountCurve, anchor: f64, s: u64, t: u64) -> Result<f64> {
    if !(anchor > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "anchor must be positive, got {anchor}"
        )));
    }
    let y = anchor * curve.d(t)? / curve.d(t + s)?;
    let z = anchor / curve.d(s)?;
    Ok((z / y - 1.0) / curve.d(s + t)?)
}

/// Maximum of `|W|` over all `s, t` with `s + t <= T`.
pub fn measure_w_axiom(curve: &DiscountCurve, anchor: f64) -> Result<ViolationReport> {
    let h = curve.horizon as u64;
    let mut best = ArgMax::new();
    for s in 0..=h {
        for t in 0..=(h - s) {
            let w = w_defect(curve, anchor, s, t)?.abs();
            best.push(w, || (s, t));
        }
    }
    Ok(ViolationReport {
        parameter: "theta_w".into(),
        value: best.value_or(0.0),
        witness: best.witness.map_or(Witness::None, |(s, t)| Witness::Dates {
            s: s as f64,
            t: t as f64,
        }),
        samples_evaluated: best.count,
        tolerance: 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactRecovery {
    pub tau: u64,
    pub threshold: f64,
    pub gamma: f64,
    /// `max_{t <= T} |d(t) - gamma^t|`.
    pub defect: f64,
    pub defect_at: u64,
    /// The defect is within [`EXACTNESS_TOL`].
    pub exact: bool,
}

/// `gamma = d(tau)^(1/tau)` for the least `tau` with
/// `d(tau) <= min(1/4, 1/(4 theta_w))`.
pub fn exact_recovery(curve: &DiscountCurve, theta_w: f64) -> Result<ExactRecovery> {
    if !curve.is_strictly_decreasing()? {
        return Err(Error::HypothesisFailed(
            "discount factor is not strictly decreasing".into(),
        ));
    }
    let threshold = if theta_w > 0.0 {
        0.25f64.min(0.25 / theta_w)
    } else {
        0.25
    };
    let h = curve.horizon as u64;
    let mut tau = None;
    for t in 1..=h {
        if curve.d(t)? <= threshold {
            tau = Some(t);
            break;
        }
    }
    let tau = tau.ok_or(Error::NoSuchTau {
        threshold,
        horizon: h,
    })?;
    let gamma = (curve.log_d(tau)? / tau as f64).exp();
    let mut worst = ArgMax::new();
    for t in 0..=h {
        worst.push((curve.d(t)? - gamma.powi(t as i32)).abs(), || t);
    }
    let defect = worst.value_or(0.0);
    Ok(ExactRecovery {
        tau,
        threshold,
        gamma,
        defect,
        defect_at: worst.witness.unwrap_or(0),
        exact: defect <= EXACTNESS_TOL,
    })
}

/// Columns `t, d, gamma_t, log_defect, theta`.
pub fn discount_table(curve: &DiscountCurve, gamma: f64, theta: f64) -> Result<Table> {
    let mut table = Table::new(&["t", "d", "gamma_t", "log_defect", "theta"]);
    for t in 0..=curve.horizon as u64 {
        let ld = curve.log_d(t)?;
        let lg = t as f64 * gamma.ln();
        table.push(vec![
            Cell::from(t as usize),
            ld.exp().into(),
            lg.exp().into(),
            (ld - lg).abs().into(),
            theta.into(),
        ]);
    }
    Ok(table)
}

/// Columns `n, partial_sum`.
pub fn partial_sum_table(partial_sums: &[f64]) -> Table {
    let mut table = Table::new(&["n", "partial_sum"]);
    for (n, p) in partial_sums.iter().enumerate() {
        table.push(vec![Cell::from(n), (*p).into()]);
    }
    table
}
