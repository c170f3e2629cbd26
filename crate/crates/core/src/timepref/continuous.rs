//! Continuous time: the curve `g(t) = u(x_bar, t)`, its inverse `gamma`,
//! and the time-shift representation `h(x, t) = g(t + gamma(x))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prefcore::report::ArgMax;
use crate::prefcore::{
    bisect_monotone, linspace, ContinuousTimeModel, NearRepresentation, RepresentationKind, Table,
    ViolationReport, Witness,
};

/// Doublings of the search bracket before a date is declared unreachable.
const MAX_DOUBLINGS: usize = 64;

/// `g` tabulated on `[0, horizon]`, with the horizon doubled until
/// `g(horizon) < min x - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaCurve {
    pub model: ContinuousTimeModel,
    pub horizon: f64,
    pub t_grid: Vec<f64>,
    pub g: Vec<f64>,
    pub x_grid: Vec<f64>,
    pub gamma: Vec<f64>,
    pub tol: f64,
}

impl GammaCurve {
    pub fn g_at(&self, t: f64) -> f64 {
        self.model.utility(self.model.x_bar(), t)
    }

    /// `gamma(x)`: the date at which `x_bar` is worth `x` today.
    pub fn gamma_at(&self, x: f64) -> Result<f64> {
        gamma_of(&self.model, x, self.horizon, self.tol)
    }
}

fn gamma_of(model: &ContinuousTimeModel, x: f64, start: f64, tol: f64) -> Result<f64> {
    let x_bar = model.x_bar();
    if x > x_bar {
        return Err(Error::InvalidParameter(format!(
            "amount {x} exceeds the top amount {x_bar}"
        )));
    }
    if x == x_bar {
        return Ok(0.0);
    }
    let mut hi = start.max(1.0);
    for _ in 0..MAX_DOUBLINGS {
        if model.utility(x_bar, hi) < x {
            return bisect_monotone(|t| model.utility(x_bar, t) - x, 0.0, hi, tol);
        }
        hi *= 2.0;
    }
    let f_hi = model.utility(x_bar, hi) - x;
    Err(Error::NoBracket {
        lo: 0.0,
        hi,
        f_lo: x_bar - x,
        f_hi,
    })
}

pub fn continuous_gamma_curve(
    model: ContinuousTimeModel,
    x_grid: &[f64],
    t_points: usize,
    tol: f64,
) -> Result<GammaCurve> {
    model.validate()?;
    let x_bar = model.x_bar();
    if x_grid.iter().any(|&x| x > x_bar) {
        return Err(Error::InvalidParameter(
            "amounts must not exceed the top amount".into(),
        ));
    }
    if model.utility(x_bar, 0.0) != x_bar {
        return Err(Error::HypothesisFailed(
            "present value of the top amount is not itself".into(),
        ));
    }
    let x_min = x_grid.iter().copied().fold(x_bar, f64::min);
    let mut horizon = 1.0;
    let mut doublings = 0;
    while model.utility(x_bar, horizon) >= x_min - 1.0 {
        horizon *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(Error::HypothesisFailed(
                "delay never depreciates the top amount below the sample".into(),
            ));
        }
    }
    let t_grid = linspace(0.0, horizon, t_points.max(2));
    let g: Vec<f64> = t_grid.iter().map(|&t| model.utility(x_bar, t)).collect();
    if g.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::HypothesisFailed(
            "utility of the top amount is not strictly decreasing in delay".into(),
        ));
    }
    let gamma = x_grid
        .iter()
        .map(|&x| gamma_of(&model, x, horizon, tol))
        .collect::<Result<_>>()?;
    Ok(GammaCurve {
        model,
        horizon,
        t_grid,
        g,
        x_grid: x_grid.to_vec(),
        gamma,
        tol,
    })
}

/// For each `(x, delta)` with `t = gamma(x)`, the `delta'` with
/// `(x_bar, t + delta') ~ (x, delta)`; reports `max |delta' - delta|`.
pub fn measure_eps_stationarity(
    curve: &GammaCurve,
    xs: &[f64],
    deltas: &[f64],
) -> Result<ViolationReport> {
    let samples: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| deltas.iter().map(move |&d| (x, d)))
        .collect();
    let gaps: Vec<f64> = samples
        .par_iter()
        .map(|&(x, delta)| {
            if delta == 0.0 {
                return Ok(0.0);
            }
            let t = curve.gamma_at(x)?;
            let target = curve.model.utility(x, delta);
            let delta_prime = gamma_of(&curve.model, target, curve.horizon, curve.tol)? - t;
            Ok((delta_prime - delta).abs())
        })
        .collect::<Result<_>>()?;
    let mut best = ArgMax::new();
    for (i, g) in gaps.iter().enumerate() {
        best.push(*g, || i);
    }
    Ok(ViolationReport {
        parameter: "eps".into(),
        value: best.value_or(0.0),
        witness: best.witness.map_or(Witness::None, |i| Witness::Delay {
            x: samples[i].0,
            t: curve.gamma_at(samples[i].0).unwrap_or(f64::NAN),
            delay: samples[i].1,
        }),
        samples_evaluated: samples.len(),
        tolerance: curve.tol,
    })
}

/// `max |u(x, t + delta) - u(x, t)| / delta` over positive delays.
pub fn measure_lambda_lipschitz(
    model: &ContinuousTimeModel,
    xs: &[f64],
    ts: &[f64],
    deltas: &[f64],
) -> ViolationReport {
    let mut best = ArgMax::new();
    for &x in xs {
        for &t in ts {
            for &delta in deltas.iter().filter(|d| **d > 0.0) {
                let shift = model.utility(x, t + delta) - model.utility(x, t);
                best.push(shift.abs() / delta, || (x, t, delta));
            }
        }
    }
    ViolationReport {
        parameter: "lambda".into(),
        value: best.value_or(0.0),
        witness: best
            .witness
            .map_or(Witness::None, |(x, t, delay)| Witness::Delay {
                x,
                t,
                delay,
            }),
        samples_evaluated: best.count,
        tolerance: 0.0,
    }
}

/// Checks `|u(x, t) - g(t + gamma(x))| <= lambda eps + tol` on the sample,
/// together with `gamma(x_bar) = 0` and `u(x_bar, 0) = x_bar`.
pub fn verify_exp3_bound(
    curve: &GammaCurve,
    eps: f64,
    lambda: f64,
    xs: &[f64],
    ts: &[f64],
    tol: f64,
) -> Result<NearRepresentation> {
    let x_bar = curve.model.x_bar();
    if curve.gamma_at(x_bar)? != 0.0 || curve.g_at(0.0) != x_bar {
        return Err(Error::HypothesisFailed(
            "top amount is not its own present value".into(),
        ));
    }
    let x_min = xs.iter().copied().fold(x_bar, f64::min);
    if curve.g_at(curve.horizon) >= x_min - 1.0 {
        return Err(Error::HypothesisFailed(
            "horizon too short for the sampled amounts".into(),
        ));
    }
    let rows = time_shift_rows(curve, xs, ts)?;
    let bound = lambda * eps;
    let mut worst = ArgMax::new();
    for r in &rows {
        worst.push(r.defect, || (r.x, r.t));
    }
    let distance = worst.value_or(0.0);
    let witness = worst.witness.map(|(x, t)| vec![x, t]).unwrap_or_default();
    if distance > bound + tol {
        return Err(Error::BoundViolated {
            distance,
            bound,
            witness,
        });
    }
    Ok(NearRepresentation {
        kind: RepresentationKind::TimeShift,
        parameters: vec![x_bar, curve.horizon],
        achieved_distance: distance,
        bound,
        witness,
        points_checked: rows.len(),
    })
}

/// One sample of the time-shift representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeShiftRow {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub h: f64,
    pub defect: f64,
}

pub fn time_shift_rows(curve: &GammaCurve, xs: &[f64], ts: &[f64]) -> Result<Vec<TimeShiftRow>> {
    let mut rows = Vec::with_capacity(xs.len() * ts.len());
    for &x in xs {
        let gx = curve.gamma_at(x)?;
        for &t in ts {
            let u = curve.model.utility(x, t);
            let h = curve.g_at(t + gx);
            rows.push(TimeShiftRow {
                x,
                t,
                u,
                h,
                defect: (u - h).abs(),
            });
        }
    }
    Ok(rows)
}

/// Columns `x, t, u, h, defect, bound`.
pub fn time_shift_table(rows: &[TimeShiftRow], bound: f64) -> Table {
    let mut table = Table::new(&["x", "t", "u", "h", "defect", "bound"]);
    for r in rows {
        table.push(vec![
            r.x.into(),
            r.t.into(),
            r.u.into(),
            r.h.into(),
            r.defect.into(),
            bound.into(),
        ]);
    }
    table
}

/// Kendall rank correlation over the pairs untied in both arguments.
pub fn kendall_tau(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (mut conc, mut disc) = (0i64, 0i64);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] == a[j] || b[i] == b[j] {
                continue;
            }
            if (a[i] < a[j]) == (b[i] < b[j]) {
                conc += 1;
            } else {
                disc += 1;
            }
        }
    }
    if conc + disc == 0 {
        return 1.0;
    }
    (conc - disc) as f64 / (conc + disc) as f64
}

/// Rank agreement between `h(x, t)` and `X exp(-t / b)`, `X = e^x`, where
/// `b = gamma(x) / (x_bar - x)` is read off the curve at the lowest sampled
/// amount. Returns `(b, tau)`.
pub fn exponential_ordinal_check(curve: &GammaCurve, xs: &[f64], ts: &[f64]) -> Result<(f64, f64)> {
    let x_bar = curve.model.x_bar();
    let x0 = xs.iter().copied().fold(x_bar, f64::min);
    if x0 >= x_bar {
        return Err(Error::InvalidParameter(
            "need an amount below the top amount".into(),
        ));
    }
    let b = curve.gamma_at(x0)? / (x_bar - x0);
    let rows = time_shift_rows(curve, xs, ts)?;
    let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let v: Vec<f64> = rows.iter().map(|r| r.x.exp() * (-r.t / b).exp()).collect();
    let (mut hk, mut vk) = (Vec::new(), Vec::new());
    // Round to suppress rounding-level disagreements between exactly tied
    // values.
    for (a, c) in h.iter().zip(&v) {
        hk.push((a * 1e9).round());
        vk.push((c.ln() * 1e9).round());
    }
    Ok((b, kendall_tau(&hk, &vk)))
}
