//! Approximate homogeneity: the power limit `v(x) = lim eta^-n u(eta^n x)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::additivity::{sup_check, SCALE_GUARD};
use super::utility::{ActSampler, ActUtility};
use crate::error::{Error, Result};
use crate::prefcore::{cauchy_limit, Act, NearRepresentation, RepresentationKind};

/// Scale factors at which homogeneity of the limit is checked; two are
/// irrational.
pub const HOMOGENEITY_PROBES: [f64; 4] = [
    0.5,
    3.0,
    std::f64::consts::SQRT_2,
    std::f64::consts::FRAC_PI_2,
];

/// `|u(lambda x) - lambda u(x)|`.
pub fn measure_homog_deviation<U: ActUtility + ?Sized>(u: &U, x: &Act, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scale factor must be positive, got {lambda}"
        )));
    }
    Ok((u.eval(&x.scale(lambda))? - lambda * u.eval(x)?).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogLimit {
    pub value: f64,
    /// `sum_{j >= 0} eta^-(j+1) |u(eta^(j+1) x) - eta u(eta^j x)|` up to the
    /// iterate used. The sum telescopes to a bound on `|eta^-n u(eta^n x) - u(x)|`.
    pub theta: f64,
    pub n_used: usize,
    pub iterates: Vec<f64>,
}

pub fn homog_limit<U: ActUtility + ?Sized>(
    u: &U,
    x: &Act,
    eta: f64,
    tol: f64,
    n_max: usize,
) -> Result<HomogLimit> {
    if !(eta > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "power base must exceed 1, got {eta}"
        )));
    }
    let est = cauchy_limit(
        |n| {
            let s = eta.powi(n as i32);
            (x.max_payoff() * s <= SCALE_GUARD).then(|| u.eval(&x.scale(s)).map(|v| v / s))
        },
        tol,
        n_max,
    )?;
    let mut theta = 0.0;
    for j in 0..est.n_used {
        let s = eta.powi(j as i32);
        theta += measure_homog_deviation(u, &x.scale(s), eta)? / (eta * s);
    }
    Ok(HomogLimit {
        value: est.value,
        theta,
        n_used: est.n_used,
        iterates: est.iterates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogCheck {
    /// Distance `sup |u - v|` against `2 theta`.
    pub representation: NearRepresentation,
    /// Sample maximum of the per-point series.
    pub theta: f64,
    /// Largest `|v(r x) - r v(x)|` over the grid and the probe factors.
    pub homogeneity_defect: f64,
}

/// Builds `v` on the grid, checks `|u - v| <= 2 theta` and that `v` is
/// homogeneous.
pub fn verify_homog_bound<U: ActUtility + ?Sized>(
    u: &U,
    eta: f64,
    sampler: &ActSampler,
    tol: f64,
    n_max: usize,
) -> Result<HomogCheck> {
    let points = sampler.points(u.dim());
    let rows: Vec<(f64, f64, f64)> = points
        .par_iter()
        .map(|x| {
            let lim = homog_limit(u, x, eta, tol, n_max)?;
            let mut defect = 0.0f64;
            for r in HOMOGENEITY_PROBES {
                let vr = homog_limit(u, &x.scale(r), eta, tol, n_max)?.value;
                defect = defect.max((vr - r * lim.value).abs());
            }
            Ok(((u.eval(x)? - lim.value).abs(), lim.theta, defect))
        })
        .collect::<Result<_>>()?;
    let theta = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let homogeneity_defect = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let dists: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let representation = sup_check(
        &points,
        &dists,
        2.0 * theta + tol,
        RepresentationKind::Homogeneous,
        vec![eta],
    )?;
    Ok(HomogCheck {
        representation,
        theta,
        homogeneity_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefcore::{ActModel, Attitude};
    use crate::uncertainty::utility::{CeUtility, CE_TOL};

    /// `u(x) = x_1 + x_2 + M sin(x_1)`: deviation from homogeneity at most
    /// `M (1 + eta)`.
    struct Wobbly(f64);

    impl ActUtility for Wobbly {
        fn dim(&self) -> usize {
            2
        }
        fn eval(&self, x: &Act) -> Result<f64> {
            let p = x.payoffs();
            Ok(p[0] + p[1] + self.0 * p[0].sin())
        }
    }

    #[test]
    fn meu_is_its_own_limit() {
        let u = CeUtility::new(
            ActModel::Meu {
                priors: vec![vec![0.3, 0.7], vec![0.7, 0.3]],
            },
            CE_TOL,
        )
        .unwrap();
        let x = Act::new(vec![3.0, 1.0]).unwrap();
        let lim = homog_limit(&u, &x, 2.0, 1e-12, 60).unwrap();
        assert_eq!(lim.theta, 0.0);
        assert!((lim.value - u.eval(&x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn smooth_power_limit_matches_mean_prior() {
        let u = CeUtility::new(
            ActModel::SmoothAmbiguity {
                f: Attitude::ZMinusExp,
                priors: vec![vec![0.3, 0.7], vec![0.8, 0.2]],
                weights: vec![0.5, 0.5],
            },
            1e-12,
        )
        .unwrap();
        let lim = homog_limit(&u, &Act::new(vec![2.0, 1.0]).unwrap(), 2.0, 1e-10, 80).unwrap();
        assert!((lim.value - 1.55).abs() < 1e-8);
    }

    #[test]
    fn bounded_deviation_series_is_geometric() {
        let m = 0.1;
        let eta = 10.0;
        let lim = homog_limit(
            &Wobbly(m),
            &Act::new(vec![1.0, 2.0]).unwrap(),
            eta,
            1e-9,
            40,
        )
        .unwrap();
        assert!(lim.theta <= m * (1.0 + eta) / (eta - 1.0));
        assert!((lim.value - 3.0).abs() < 1e-8);
    }

    #[test]
    fn unit_scale_has_no_deviation() {
        let x = Act::new(vec![1.5, 0.5]).unwrap();
        assert_eq!(measure_homog_deviation(&Wobbly(0.3), &x, 1.0).unwrap(), 0.0);
    }
}
