//! Midpoint defects, the doubling limit `v(x) = lim 2^-n u(2^n x)` and its
//! distance to `u`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::utility::{ActSampler, ActUtility};
use crate::error::{Error, Result};
use crate::prefcore::report::ArgMax;
use crate::prefcore::series::classify;
use crate::prefcore::{
    cauchy_limit, Act, ActModel, NearRepresentation, RepresentationKind, SeriesSum,
    ViolationReport, Witness, BOUND_SLACK, DEFAULT_RATIO_TOL,
};

/// Scaled acts are not evaluated beyond this sup-norm.
pub const SCALE_GUARD: f64 = 1e12;

/// Tolerance of the prior-sum check.
pub const ADDITIVITY_TOL: f64 = 1e-6;

fn within_guard(x: &Act, factor: f64) -> bool {
    x.max_payoff() * factor <= SCALE_GUARD
}

/// `|u((x + y) / 2) - u(x) / 2 - u(y) / 2|`, the least `phi(x, y)`
/// compatible with the axiom at `(x, y)`.
pub fn measure_phi<U: ActUtility + ?Sized>(u: &U, x: &Act, y: &Act) -> Result<f64> {
    let mid = u.eval(&x.midpoint(y))?;
    Ok((mid - 0.5 * u.eval(x)? - 0.5 * u.eval(y)?).abs())
}

/// `sum_{i=0}^{n} 2^-i phi(2^i x, 2^i y)` for `n <= n_max`, stopping early
/// once `2^i ||(x, y)||` leaves the guarded range.
pub fn dyadic_series<U: ActUtility + ?Sized>(
    u: &U,
    x: &Act,
    y: &Act,
    n_max: usize,
) -> Result<SeriesSum> {
    let mut terms = Vec::with_capacity(n_max + 1);
    for i in 0..=n_max {
        let s = (2.0f64).powi(i as i32);
        if !within_guard(x, s) || !within_guard(y, s) {
            break;
        }
        terms.push(measure_phi(u, &x.scale(s), &y.scale(s))? / s);
    }
    Ok(classify(&terms, DEFAULT_RATIO_TOL))
}

/// Sample maximum of the dyadic series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub report: ViolationReport,
    /// Every sampled series passed the tail-decay test. A heuristic: no
    /// finite computation proves divergence.
    pub converged: bool,
    /// Partial sums at the witness.
    pub witness_partial_sums: Vec<f64>,
    /// Largest single `phi` evaluated, a uniform cap on the sample.
    pub phi_cap: f64,
}

/// Pairs probed by [`theta_estimate`]: `(2x, 0)` for every grid point `x`
/// (this controls `|u(x) - v(x)|`), unit-act pairs, and coarse pairs.
pub fn theta_pairs(sampler: &ActSampler, dim: usize) -> Vec<(Act, Act)> {
    let zero = Act::constant(dim, 0.0);
    let mut pairs: Vec<(Act, Act)> = sampler
        .points(dim)
        .into_iter()
        .map(|x| (x.scale(2.0), zero.clone()))
        .collect();
    for i in 0..dim {
        for j in i + 1..dim {
            pairs.push((Act::unit(dim, i), Act::unit(dim, j)));
        }
    }
    pairs.extend(sampler.coarse_pairs(dim));
    pairs
}

pub fn theta_estimate<U: ActUtility + ?Sized>(
    u: &U,
    sampler: &ActSampler,
    n_max: usize,
) -> Result<ThetaReport> {
    let pairs = theta_pairs(sampler, u.dim());
    let series: Vec<SeriesSum> = pairs
        .par_iter()
        .map(|(x, y)| dyadic_series(u, x, y, n_max))
        .collect::<Result<_>>()?;
    let mut best = ArgMax::new();
    let mut cap = 0.0f64;
    for (i, s) in series.iter().enumerate() {
        best.push(s.sum, || i);
        let mut prev = 0.0;
        for (k, p) in s.partial_sums.iter().enumerate() {
            cap = cap.max((p - prev) * (2.0f64).powi(k as i32));
            prev = *p;
        }
    }
    let converged = series.iter().all(|s| s.converged);
    let (witness, partial) = match best.witness {
        Some(i) => (
            Witness::ActPair {
                x: pairs[i].0.payoffs().to_vec(),
                y: pairs[i].1.payoffs().to_vec(),
            },
            series[i].partial_sums.clone(),
        ),
        None => (Witness::None, Vec::new()),
    };
    Ok(ThetaReport {
        report: ViolationReport {
            parameter: "theta".into(),
            value: best.value_or(0.0),
            witness,
            samples_evaluated: pairs.len(),
            tolerance: u.tol(),
        },
        converged,
        witness_partial_sums: partial,
        phi_cap: cap,
    })
}

/// The doubling limit at one act.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingLimit {
    pub value: f64,
    pub n_used: usize,
    /// `sum_{i >= n} 2^-i delta(2^(i+1) x)` over the evaluable range, which
    /// bounds the distance of the returned iterate to the limit.
    pub tail_bound: f64,
    pub iterates: Vec<f64>,
}

pub fn hyers_ulam_limit<U: ActUtility + ?Sized>(
    u: &U,
    x: &Act,
    tol: f64,
    n_max: usize,
) -> Result<DoublingLimit> {
    let est = cauchy_limit(
        |n| {
            let s = (2.0f64).powi(n as i32);
            within_guard(x, s).then(|| u.eval(&x.scale(s)).map(|v| v / s))
        },
        tol,
        n_max,
    )?;
    let mut tail = 0.0;
    let mut i = est.n_used;
    loop {
        let s = (2.0f64).powi(i as i32);
        if !within_guard(x, 2.0 * s) || i > est.n_used + 64 {
            break;
        }
        let term = (u.eval(&x.scale(s))? - 0.5 * u.eval(&x.scale(2.0 * s))?).abs() / s;
        tail += term;
        i += 1;
    }
    Ok(DoublingLimit {
        value: est.value,
        n_used: est.n_used,
        tail_bound: tail,
        iterates: est.iterates,
    })
}

/// Subjective expected utility `v(x) = sum_i p_i x_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearBenchmark {
    pub prior: Vec<f64>,
    /// `v(1)`, which is 1 for a normalized utility.
    pub unit_value: f64,
}

impl LinearBenchmark {
    pub fn eval(&self, x: &Act) -> f64 {
        self.prior
            .iter()
            .zip(x.payoffs())
            .map(|(p, xi)| p * xi)
            .sum()
    }
}

/// `p_i = v(e_i)`, checked against `v(1)`.
pub fn extract_prior<U: ActUtility + ?Sized>(
    u: &U,
    tol: f64,
    n_max: usize,
) -> Result<LinearBenchmark> {
    let d = u.dim();
    let prior: Vec<f64> = (0..d)
        .map(|i| hyers_ulam_limit(u, &Act::unit(d, i), tol, n_max).map(|l| l.value))
        .collect::<Result<_>>()?;
    let unit = hyers_ulam_limit(u, &Act::constant(d, 1.0), tol, n_max)?.value;
    let sum: f64 = prior.iter().sum();
    if (sum - unit).abs() > ADDITIVITY_TOL {
        return Err(Error::NotAdditive { sum, unit });
    }
    Ok(LinearBenchmark {
        prior,
        unit_value: unit,
    })
}

/// The guarantee `||u - v||` is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "value", rename_all = "kebab-case")]
pub enum AaBound {
    /// Sample maximum of the dyadic series.
    Theta(f64),
    /// A uniform cap on `phi`; the guarantee is twice the cap.
    UniformCap(f64),
}

impl AaBound {
    pub fn bound(&self) -> f64 {
        match *self {
            AaBound::Theta(t) => t,
            AaBound::UniformCap(e) => 2.0 * e,
        }
    }
}

/// Checks `|u(x) - v(x)| <= bound` on the verification grid.
pub fn verify_aa_bound<U: ActUtility + ?Sized>(
    u: &U,
    benchmark: &LinearBenchmark,
    bound: AaBound,
    sampler: &ActSampler,
) -> Result<NearRepresentation> {
    let limit = bound.bound();
    let points = sampler.points(u.dim());
    let dists: Vec<f64> = points
        .par_iter()
        .map(|x| Ok((u.eval(x)? - benchmark.eval(x)).abs()))
        .collect::<Result<_>>()?;
    sup_check(
        &points,
        &dists,
        limit,
        RepresentationKind::Linear,
        benchmark.prior.clone(),
    )
}

pub(crate) fn sup_check(
    points: &[Act],
    dists: &[f64],
    limit: f64,
    kind: RepresentationKind,
    parameters: Vec<f64>,
) -> Result<NearRepresentation> {
    let mut worst = ArgMax::new();
    for (i, d) in dists.iter().enumerate() {
        worst.push(*d, || i);
    }
    let witness = worst
        .witness
        .map(|i| points[i].payoffs().to_vec())
        .unwrap_or_default();
    let distance = worst.value_or(0.0);
    if distance > limit + BOUND_SLACK {
        return Err(Error::BoundViolated {
            distance,
            bound: limit,
            witness,
        });
    }
    Ok(NearRepresentation {
        kind,
        parameters,
        achieved_distance: distance,
        bound: limit,
        witness,
        points_checked: points.len(),
    })
}

/// Largest `|2^-n u(2^n x) - u(x)|` over the grid and `n <= n_max`; zero for
/// a degree-one homogeneous utility.
pub fn verify_homothetic_exactness<U: ActUtility + ?Sized>(
    u: &U,
    sampler: &ActSampler,
    n_max: usize,
) -> Result<f64> {
    let points = sampler.points(u.dim());
    let defects: Vec<f64> = points
        .par_iter()
        .map(|x| {
            let ux = u.eval(x)?;
            let mut worst = 0.0f64;
            for n in 0..=n_max {
                let s = (2.0f64).powi(n as i32);
                if !within_guard(x, s) {
                    break;
                }
                worst = worst.max((u.eval(&x.scale(s))? / s - ux).abs());
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// Distance of the smooth model's own formula to its mean-prior expected
/// utility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothBound {
    pub representation: NearRepresentation,
    /// `|u(0) - v(0)|`, which equals one for both transforms.
    pub defect_at_zero: f64,
    /// Largest gap between the measured distance and the closed form
    /// `|sum_k w_k (f(p_k . x) - p_k . x)|`.
    pub formula_gap: f64,
}

pub fn smooth_ambiguity_bound(model: &ActModel, sampler: &ActSampler) -> Result<SmoothBound> {
    let ActModel::SmoothAmbiguity { f, priors, weights } = model else {
        return Err(Error::InvalidParameter(
            "smooth ambiguity model required".into(),
        ));
    };
    model.validate()?;
    let benchmark = LinearBenchmark {
        prior: model.mean_prior(),
        unit_value: 1.0,
    };
    let closed_form = |x: &Act| -> f64 {
        priors
            .iter()
            .zip(weights)
            .map(|(p, w)| {
                let z: f64 = p.iter().zip(x.payoffs()).map(|(a, b)| a * b).sum();
                w * f.excess(z)
            })
            .sum::<f64>()
            .abs()
    };
    let points = sampler.points(model.dim());
    let dists: Vec<f64> = points
        .iter()
        .map(|x| (model.value(x) - benchmark.eval(x)).abs())
        .collect();
    let formula_gap = points
        .iter()
        .zip(&dists)
        .map(|(x, d)| (d - closed_form(x)).abs())
        .fold(0.0, f64::max);
    let zero = Act::constant(model.dim(), 0.0);
    let defect_at_zero = (model.value(&zero) - benchmark.eval(&zero)).abs();
    let representation = sup_check(
        &points,
        &dists,
        1.0,
        RepresentationKind::Linear,
        benchmark.prior,
    )?;
    Ok(SmoothBound {
        representation,
        defect_at_zero,
        formula_gap,
    })
}
