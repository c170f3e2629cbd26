use nearrep_core::prefcore::{Act, ActModel, Attitude};
use nearrep_core::uncertainty::{
    extract_prior, hull_weights, hyers_ulam_limit, measure_eps_ua, measure_homog_deviation,
    measure_phi, quasiconcavify, smooth_ambiguity_bound, theta_estimate, verify_aa_bound,
    verify_homothetic_exactness, verify_quasiconcave_bound, AaBound, ActSampler, ActUtility,
    CeUtility, IntegralUtility,
};
use proptest::prelude::*;

const LIMIT_TOL: f64 = 1e-11;
const N_MAX: usize = 80;

fn two_priors() -> Vec<Vec<f64>> {
    vec![vec![0.3, 0.7], vec![0.8, 0.2]]
}

fn meu() -> ActModel {
    ActModel::Meu {
        priors: vec![vec![0.3, 0.7], vec![0.7, 0.3]],
    }
}

fn smooth(f: Attitude) -> ActModel {
    ActModel::SmoothAmbiguity {
        f,
        priors: two_priors(),
        weights: vec![0.5, 0.5],
    }
}

fn all_models() -> Vec<ActModel> {
    vec![
        ActModel::Seu {
            prior: vec![0.25, 0.75],
        },
        meu(),
        smooth(Attitude::Sqrt1pz2),
        smooth(Attitude::ZMinusExp),
        ActModel::Ces {
            shares: vec![0.4, 0.6],
            rho: 0.5,
        },
        ActModel::TiltedSeu {
            prior: vec![0.6, 0.4],
            amplitude: 0.15,
        },
    ]
}

fn ce(model: ActModel) -> CeUtility {
    CeUtility::new(model, 1e-13).unwrap()
}

fn act(x: &[f64]) -> Act {
    Act::new(x.to_vec()).unwrap()
}

fn v<U: ActUtility>(u: &U, x: &Act) -> f64 {
    hyers_ulam_limit(u, x, LIMIT_TOL, N_MAX).unwrap().value
}

/// Closed form of the smooth model's doubling limit: the mean-prior
/// expectation.
fn mean_prior_value(x: &Act) -> f64 {
    0.55 * x.payoffs()[0] + 0.45 * x.payoffs()[1]
}

#[test]
fn certainty_equivalent_normalizes_constants() {
    for model in all_models() {
        let u = ce(model.clone());
        for c in [0.0, 1.0, 7.5, 1000.0] {
            let got = u.eval(&Act::constant(2, c)).unwrap();
            assert!((got - c).abs() <= 1e-10, "{model:?} at {c}: {got}");
        }
    }
}

#[test]
fn maxmin_certainty_equivalent_takes_the_worst_prior() {
    assert_eq!(ce(meu()).eval(&act(&[1.0, 0.0])).unwrap(), 0.3);
}

#[test]
fn maxmin_midpoint_defect_grows_linearly_with_scale() {
    let u = ce(meu());
    for i in 0..10 {
        let s = (2.0f64).powi(i);
        let phi = measure_phi(&u, &act(&[s, 0.0]), &act(&[0.0, s])).unwrap();
        assert!((phi - 0.2 * s).abs() < 1e-9);
    }
}

#[test]
fn maxmin_limit_is_not_additive() {
    let u = ce(meu());
    let (x, y) = (act(&[1.0, 0.0]), act(&[0.0, 1.0]));
    let defect = v(&u, &x.add(&y)) - v(&u, &x) - v(&u, &y);
    assert!((defect - 0.4).abs() < 1e-12);
}

#[test]
fn homothetic_models_equal_their_limit() {
    let sampler = ActSampler::new(10.0, 9);
    for model in [
        meu(),
        ActModel::Ces {
            shares: vec![0.4, 0.6],
            rho: 0.5,
        },
    ] {
        let gap = verify_homothetic_exactness(&ce(model), &sampler, 20).unwrap();
        assert!(gap < 1e-9, "{gap}");
    }
}

#[test]
fn smooth_limit_is_the_mean_prior_expectation() {
    for f in [Attitude::Sqrt1pz2, Attitude::ZMinusExp] {
        let u = ce(smooth(f));
        for x in [[2.0, 1.0], [0.5, 7.0], [3.0, 3.0]] {
            let x = act(&x);
            assert!((v(&u, &x) - mean_prior_value(&x)).abs() < 1e-8);
        }
        let prior = extract_prior(&u, LIMIT_TOL, N_MAX).unwrap();
        assert!((prior.prior[0] - 0.55).abs() < 1e-6);
        assert!((prior.prior[1] - 0.45).abs() < 1e-6);
    }
}

#[test]
fn exponential_attitude_distance_is_the_tail_integral() {
    let m = smooth(Attitude::ZMinusExp);
    let integral = IntegralUtility::new(m.clone()).unwrap();
    for x in [[2.0, 1.0], [0.0, 0.0], [4.0, 0.5]] {
        let x = act(&x);
        let dist = (integral.eval(&x).unwrap() - mean_prior_value(&x)).abs();
        let tail: f64 = two_priors()
            .iter()
            .map(|p| 0.5 * (-(p[0] * x.payoffs()[0] + p[1] * x.payoffs()[1])).exp())
            .sum();
        assert!((dist - tail).abs() < 1e-14);
    }
    let rep = smooth_ambiguity_bound(&m, &ActSampler::new(10.0, 11)).unwrap();
    assert!((rep.defect_at_zero - 1.0).abs() < 1e-15);
}

#[test]
fn exponential_attitude_homogeneity_gap_at_the_diagonal() {
    let u = IntegralUtility::new(smooth(Attitude::ZMinusExp)).unwrap();
    let got = measure_homog_deviation(&u, &act(&[1.0, 1.0]), 2.0).unwrap();
    let exact = 2.0 * (-1.0f64).exp() - (-2.0f64).exp();
    assert!((got - exact).abs() < 1e-14);
}

#[test]
fn doubling_bound_holds_for_tilted_model() {
    let u = ce(ActModel::TiltedSeu {
        prior: vec![0.6, 0.4],
        amplitude: 0.15,
    });
    let sampler = ActSampler::new(6.0, 13);
    let theta = theta_estimate(&u, &sampler, 40).unwrap();
    assert!(theta.converged);
    let bench = extract_prior(&u, LIMIT_TOL, N_MAX).unwrap();
    assert!((bench.prior[0] - 0.6).abs() < 1e-9);
    let rep = verify_aa_bound(&u, &bench, AaBound::Theta(theta.report.value), &sampler).unwrap();
    assert!(rep.achieved_distance > 0.0);
    let rep = verify_aa_bound(&u, &bench, AaBound::UniformCap(theta.phi_cap), &sampler).unwrap();
    assert_eq!(rep.bound, 2.0 * theta.phi_cap);
}

#[test]
fn averse_smooth_model_is_already_quasiconcave() {
    let u = ce(smooth(Attitude::ZMinusExp));
    let bench = quasiconcavify(&u, 5.0, 11, 0).unwrap();
    let eps = measure_eps_ua(&u, &ActSampler::new(5.0, 11), &bench.chain_triples()).unwrap();
    assert_eq!(eps.value, 0.0);
    let rep = verify_quasiconcave_bound(&bench, eps.value).unwrap();
    assert!(rep.achieved_distance <= 1e-9);
}

#[test]
fn loving_smooth_model_needs_the_hull() {
    let u = ce(smooth(Attitude::Sqrt1pz2));
    let bench = quasiconcavify(&u, 5.0, 11, 0).unwrap();
    let eps = measure_eps_ua(&u, &ActSampler::new(5.0, 11), &bench.chain_triples()).unwrap();
    assert!(eps.value > 0.0);
    let rep = verify_quasiconcave_bound(&bench, eps.value).unwrap();
    assert!(rep.achieved_distance > 0.0);
    assert!(rep.achieved_distance <= 2.0 * eps.value + 1e-7);
}

fn payoff() -> impl Strategy<Value = f64> {
    0.0f64..20.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn limit_is_additive(a in payoff(), b in payoff(), c in payoff(), d in payoff()) {
        let u = ce(smooth(Attitude::Sqrt1pz2));
        let (x, y) = (act(&[a, b]), act(&[c, d]));
        prop_assert!((v(&u, &x.add(&y)) - v(&u, &x) - v(&u, &y)).abs() <= 1e-6);
    }

    #[test]
    fn limit_is_positively_homogeneous(a in payoff(), b in payoff(), k in 0usize..4) {
        let r = [0.5, 3.0, std::f64::consts::SQRT_2, std::f64::consts::E][k];
        let u = ce(smooth(Attitude::ZMinusExp));
        let x = act(&[a, b]);
        prop_assert!((v(&u, &x.scale(r)) - r * v(&u, &x)).abs() <= 1e-6);
    }

    #[test]
    fn limit_is_monotone(a in payoff(), b in payoff(), da in 0.0f64..5.0, db in 0.0f64..5.0) {
        let u = ce(ActModel::TiltedSeu { prior: vec![0.6, 0.4], amplitude: 0.15 });
        let x = act(&[a, b]);
        let y = act(&[a + da, b + db]);
        prop_assert!(v(&u, &x) <= v(&u, &y) + 1e-9);
    }

    #[test]
    fn limit_satisfies_jensen(a in payoff(), b in payoff(), c in payoff(), d in payoff()) {
        let u = ce(smooth(Attitude::ZMinusExp));
        let (x, y) = (act(&[a, b]), act(&[c, d]));
        let gap = v(&u, &x.midpoint(&y)) - 0.5 * v(&u, &x) - 0.5 * v(&u, &y);
        prop_assert!(gap.abs() <= 1e-6);
    }

    #[test]
    fn convex_combinations_are_recovered_with_few_points(
        pts in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 3..12),
        raw in prop::collection::vec(0.0f64..1.0, 12),
    ) {
        let w: Vec<f64> = raw[..pts.len()].to_vec();
        let s: f64 = w.iter().sum();
        prop_assume!(s > 1e-3);
        let x: Vec<f64> = (0..2)
            .map(|j| pts.iter().zip(&w).map(|(p, wk)| p[j] * wk / s).sum())
            .collect();
        let dec = hull_weights(&pts, &x);
        prop_assert!(dec.is_some());
        let dec = dec.unwrap();
        prop_assert!(dec.len() <= 3);
        prop_assert!((dec.iter().map(|d| d.1).sum::<f64>() - 1.0).abs() < 1e-12);
        for j in 0..2 {
            let c: f64 = dec.iter().map(|&(k, wk)| wk * pts[k][j]).sum();
            prop_assert!((c - x[j]).abs() < 1e-7);
        }
    }

    #[test]
    fn points_beyond_the_box_are_outside_the_hull(
        pts in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 1..10),
        off in 0.01f64..3.0,
    ) {
        let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(hull_weights(&pts, &[hi + off, 0.0]).is_none());
    }

    #[test]
    fn doubling_iterates_obey_induction_inequality(a in payoff(), b in payoff()) {
        let u = ce(smooth(Attitude::Sqrt1pz2));
        let x = act(&[a, b]);
        let zero = Act::constant(2, 0.0);
        let ux = u.eval(&x).unwrap();
        let mut rhs = 0.0;
        for n in 1..=20 {
            let s = (2.0f64).powi(n);
            // delta(2^n x) = phi(2^n x, 0).
            rhs += measure_phi(&u, &x.scale(s), &zero).unwrap() / (2.0f64).powi(n - 1);
            let lhs = (u.eval(&x.scale(s)).unwrap() / s - ux).abs();
            prop_assert!(lhs <= rhs + 1e-9, "n = {}: {} > {}", n, lhs, rhs);
        }
    }
}
