//! Relaxed uncertainty aversion and the quasi-concave hull benchmark
//! `v(x) = sup { c : x in conv U(c) }`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hull::hull_weights;
use super::utility::{ActSampler, ActUtility};
use crate::error::{Error, Result};
use crate::prefcore::report::ArgMax;
use crate::prefcore::{
    Act, NearRepresentation, RepresentationKind, ViolationReport, Witness, BOUND_SLACK,
};

/// Hull benchmarks are computed for at most this many states.
pub const MAX_HULL_DIM: usize = 3;

/// `lambda x + (1 - lambda) y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActTriple {
    pub x: Act,
    pub y: Act,
    pub lambda: f64,
}

impl ActTriple {
    pub fn mixture(&self) -> Act {
        self.x.mix(&self.y, self.lambda)
    }
}

/// `max(0, min(u(x), u(y)) - u(lambda x + (1 - lambda) y))`.
pub fn ua_defect<U: ActUtility + ?Sized>(u: &U, t: &ActTriple) -> Result<f64> {
    if t.x == t.y {
        return Ok(0.0);
    }
    let floor = u.eval(&t.x)?.min(u.eval(&t.y)?);
    Ok((floor - u.eval(&t.mixture())?).max(0.0))
}

/// Coarse pairs times interior weights.
pub fn ua_triples(sampler: &ActSampler, dim: usize) -> Vec<ActTriple> {
    let lambdas = sampler.lambdas();
    sampler
        .coarse_pairs(dim)
        .into_iter()
        .flat_map(|(x, y)| {
            lambdas.iter().map(move |&lambda| ActTriple {
                x: x.clone(),
                y: y.clone(),
                lambda,
            })
        })
        .collect()
}

/// Sample maximum of [`ua_defect`] over the sampler's triples and `extra`.
pub fn measure_eps_ua<U: ActUtility + ?Sized>(
    u: &U,
    sampler: &ActSampler,
    extra: &[ActTriple],
) -> Result<ViolationReport> {
    let mut triples = ua_triples(sampler, u.dim());
    triples.extend_from_slice(extra);
    let defects: Vec<f64> = triples
        .par_iter()
        .map(|t| ua_defect(u, t))
        .collect::<Result<_>>()?;
    let mut best = ArgMax::new();
    for (i, d) in defects.iter().enumerate() {
        best.push(*d, || i);
    }
    let witness = match best.witness {
        Some(i) if best.value > 0.0 => Witness::ActMixture {
            x: triples[i].x.payoffs().to_vec(),
            y: triples[i].y.payoffs().to_vec(),
            lambda: triples[i].lambda,
        },
        _ => Witness::None,
    };
    Ok(ViolationReport {
        parameter: "eps_ua".into(),
        value: best.value_or(0.0),
        witness,
        samples_evaluated: triples.len(),
        tolerance: u.tol(),
    })
}

/// Grid values of the hull benchmark with the decompositions that certify
/// them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiConcaveBenchmark {
    pub bound: f64,
    pub resolution: usize,
    /// Increasing level grid.
    pub levels: Vec<f64>,
    /// Sampled points, sorted by `u` descending so every upper contour set
    /// is a prefix.
    pub points: Vec<Act>,
    pub utilities: Vec<f64>,
    /// `v` at each sampled point.
    pub values: Vec<f64>,
    /// For each sampled point `x`, at most `d + 1` points of
    /// `U(v(x))` with convex weights reproducing `x`.
    pub decompositions: Vec<Vec<(usize, f64)>>,
}

impl QuasiConcaveBenchmark {
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Act::dim)
    }

    /// Largest gap between consecutive levels.
    pub fn level_spacing(&self) -> f64 {
        self.levels
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    fn coords(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.payoffs().to_vec()).collect()
    }

    /// `v(z)` for any `z` in the box.
    pub fn eval(&self, z: &Act) -> Result<f64> {
        self.eval_with(&self.coords(), z)
    }

    fn eval_with(&self, coords: &[Vec<f64>], z: &Act) -> Result<f64> {
        let floor = self.utilities.iter().copied().fold(f64::INFINITY, f64::min);
        let lo = self.levels.partition_point(|&c| c < floor);
        top_level(coords, &self.utilities, &self.levels, lo, z.payoffs())
            .map(|(c, _)| c)
            .ok_or_else(|| {
                Error::InfeasibleLp(format!("{:?} lies outside the sampled box", z.payoffs()))
            })
    }

    /// Mixing steps that assemble each sampled point from its
    /// decomposition, one partial mixture at a time.
    pub fn chain_triples(&self) -> Vec<ActTriple> {
        let mut out = Vec::new();
        for dec in &self.decompositions {
            let mut acc = self.points[dec[0].0].clone();
            let mut w_acc = dec[0].1;
            for &(k, w) in &dec[1..] {
                let lambda = w_acc / (w_acc + w);
                let t = ActTriple {
                    x: acc,
                    y: self.points[k].clone(),
                    lambda,
                };
                acc = t.mixture();
                w_acc += w;
                out.push(t);
            }
        }
        out
    }
}

/// Largest level index `>= lo` whose upper contour set contains `x` in its
/// hull, with the certifying weights.
fn top_level(
    coords: &[Vec<f64>],
    utilities: &[f64],
    levels: &[f64],
    lo: usize,
    x: &[f64],
) -> Option<(f64, Vec<(usize, f64)>)> {
    let member = |k: usize| {
        let len = utilities.partition_point(|&u| u >= levels[k]);
        hull_weights(&coords[..len], x)
    };
    let mut best = (lo, member(lo)?);
    let mut hi = levels.len();
    // Membership is monotone in the level: contour sets shrink as c grows.
    let mut low = lo + 1;
    while low < hi {
        let mid = low + (hi - low) / 2;
        match member(mid) {
            Some(w) => {
                best = (mid, w);
                low = mid + 1;
            }
            None => hi = mid,
        }
    }
    Some((levels[best.0], best.1))
}

/// Builds the hull benchmark on the box grid. Levels are the sampled
/// utility values together with `level_resolution` uniform levels.
pub fn quasiconcavify<U: ActUtility + ?Sized>(
    u: &U,
    bound: f64,
    resolution: usize,
    level_resolution: usize,
) -> Result<QuasiConcaveBenchmark> {
    let d = u.dim();
    if d == 0 || d > MAX_HULL_DIM {
        return Err(Error::InvalidParameter(format!(
            "hull benchmark supports 1 to {MAX_HULL_DIM} states, got {d}"
        )));
    }
    if !(bound > 0.0) || resolution < 2 {
        return Err(Error::InvalidParameter(
            "box bound must be positive and resolution at least 2".into(),
        ));
    }
    let grid = ActSampler::new(bound, resolution).points(d);
    let vals: Vec<f64> = grid.par_iter().map(|x| u.eval(x)).collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    let points: Vec<Act> = order.iter().map(|&i| grid[i].clone()).collect();
    let utilities: Vec<f64> = order.iter().map(|&i| vals[i]).collect();

    let mut levels = utilities.clone();
    let (u_min, u_max) = (*utilities.last().unwrap(), utilities[0]);
    if level_resolution >= 2 {
        let step = (u_max - u_min) / (level_resolution - 1) as f64;
        levels.extend((0..level_resolution).map(|k| u_min + k as f64 * step));
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.payoffs().to_vec()).collect();
    let solved: Vec<(f64, Vec<(usize, f64)>)> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let lo = levels.partition_point(|&c| c < utilities[i]);
            top_level(&coords, &utilities, &levels, lo, &coords[i]).ok_or_else(|| {
                Error::InfeasibleLp(format!(
                    "grid point {:?} not in its own contour set",
                    coords[i]
                ))
            })
        })
        .collect::<Result<_>>()?;
    let (values, decompositions) = solved.into_iter().unzip();
    Ok(QuasiConcaveBenchmark {
        bound,
        resolution,
        levels,
        points,
        utilities,
        values,
        decompositions,
    })
}

/// Checks `v >= u` on the grid and `sup (v - u) <= d eps_ua`.
pub fn verify_quasiconcave_bound(
    bench: &QuasiConcaveBenchmark,
    eps_ua: f64,
) -> Result<NearRepresentation> {
    let d = bench.dim();
    let mut worst = ArgMax::new();
    for (i, (v, u)) in bench.values.iter().zip(&bench.utilities).enumerate() {
        if *v < *u - BOUND_SLACK {
            return Err(Error::HypothesisFailed(format!(
                "hull value {v} below utility {u} at {:?}",
                bench.points[i].payoffs()
            )));
        }
        worst.push((v - u).abs(), || i);
    }
    let distance = worst.value_or(0.0);
    let bound = d as f64 * eps_ua;
    let witness = worst
        .witness
        .map(|i| bench.points[i].payoffs().to_vec())
        .unwrap_or_default();
    if distance > bound + BOUND_SLACK {
        return Err(Error::BoundViolated {
            distance,
            bound,
            witness,
        });
    }
    Ok(NearRepresentation {
        kind: RepresentationKind::Quasiconcave,
        parameters: vec![
            bench.bound,
            bench.resolution as f64,
            bench.levels.len() as f64,
        ],
        achieved_distance: distance,
        bound,
        witness,
        points_checked: bench.points.len(),
    })
}

/// Largest `min(v(x), v(y)) - v(lambda x + (1 - lambda) y)` over the
/// sampler's triples, with `v` evaluated off the grid by hull membership.
pub fn quasiconcavity_defect(bench: &QuasiConcaveBenchmark, sampler: &ActSampler) -> Result<f64> {
    let coords = bench.coords();
    let pairs = sampler.coarse_pairs(bench.dim());
    let mut ends: Vec<Act> = pairs
        .iter()
        .flat_map(|(x, y)| [x.clone(), y.clone()])
        .collect();
    ends.sort_by(|a, b| {
        a.payoffs()
            .partial_cmp(b.payoffs())
            .expect("finite payoffs")
    });
    ends.dedup();
    let end_values: Vec<f64> = ends
        .par_iter()
        .map(|z| bench.eval_with(&coords, z))
        .collect::<Result<_>>()?;
    let lookup = |z: &Act| {
        end_values[ends
            .binary_search_by(|e| e.payoffs().partial_cmp(z.payoffs()).unwrap())
            .unwrap()]
    };
    let lambdas = sampler.lambdas();
    let defects: Vec<f64> = pairs
        .par_iter()
        .flat_map_iter(|(x, y)| lambdas.iter().map(move |&l| (x, y, l)))
        .map(|(x, y, l)| {
            Ok((lookup(x).min(lookup(y)) - bench.eval_with(&coords, &x.mix(y, l))?).max(0.0))
        })
        .collect::<Result<_>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}
