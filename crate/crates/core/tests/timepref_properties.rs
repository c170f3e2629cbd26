use nearrep_core::prefcore::{linspace, ContinuousTimeModel, DiscountModel};
use nearrep_core::timepref::{
    continuous_gamma_curve, exact_recovery, exponential_ordinal_check, fit_gamma,
    measure_eps_stationarity, measure_lambda_lipschitz, measure_w_axiom, psi, stationarity_ratio,
    theta_estimate, verify_exp3_bound, verify_exp_bound, w_defect, DiscountCurve,
};
use proptest::prelude::*;

const HORIZON: usize = 100;

fn curve(model: DiscountModel) -> DiscountCurve {
    DiscountCurve::new(model, HORIZON).unwrap()
}

fn dates() -> Vec<u64> {
    (1..=HORIZON as u64).collect()
}

#[test]
fn quasi_hyperbolic_defect_equals_log_beta() {
    let c = curve(DiscountModel::QuasiHyperbolic {
        beta: 0.7,
        delta: 0.97,
    });
    let theta = theta_estimate(&c, &dates(), 60).unwrap();
    assert!(theta.converged);
    // psi(s, t) = |log beta| for all s, t >= 1, so every series sums to it.
    assert!((theta.report.value - 0.7f64.ln().abs()).abs() < 1e-12);
    let fit = fit_gamma(&c, 60, 1e-13).unwrap();
    assert!((fit.gamma - 0.97).abs() < 1e-9);
    let rep = verify_exp_bound(&c, fit.gamma, theta.report.value, &dates()).unwrap();
    // Tight: attained at every t >= 1.
    assert!((rep.achieved_distance - theta.report.value).abs() < 1e-9);
}

#[test]
fn perturbed_exponential_stays_within_three_amplitudes() {
    let (gamma, a) = (0.9, 0.05);
    let c = curve(DiscountModel::PerturbedExponential {
        gamma,
        amplitude: a,
    });
    for s in 0..30 {
        for t in 0..30 {
            assert!(psi(&c, s, t).unwrap() <= 3.0 * a + 1e-12);
        }
    }
    let theta = theta_estimate(&c, &dates(), 60).unwrap();
    assert!(theta.report.value <= 3.0 * a + 1e-12);
    let fit = fit_gamma(&c, 60, 1e-13).unwrap();
    assert!((fit.gamma - gamma).abs() < 1e-9);
    verify_exp_bound(&c, fit.gamma, theta.report.value, &dates()).unwrap();
    for t in 0..=HORIZON as u64 {
        let ratio = c.d(t).unwrap() / gamma.powi(t as i32);
        assert!((ratio - 1.0).abs() <= (3.0 * a).exp() - 1.0);
    }
}

#[test]
fn exponential_discounting_is_recovered_exactly() {
    for gamma in [0.5, 0.9, 0.95] {
        let c = curve(DiscountModel::Exponential { gamma });
        let w = measure_w_axiom(&c, 1.0).unwrap();
        // Rounding noise on f(s) f(t) ~ gamma^-T.
        assert!(w.value <= 1e-12 * gamma.powi(-(HORIZON as i32)));
        let rec = exact_recovery(&c, 0.0).unwrap();
        assert!(rec.exact);
        assert!((rec.gamma - gamma).abs() < 1e-12);
    }
}

#[test]
fn slow_discounting_never_reaches_the_threshold() {
    // 0.99^100 > 1/4.
    let c = curve(DiscountModel::Exponential { gamma: 0.99 });
    assert!(matches!(
        exact_recovery(&c, 0.0),
        Err(nearrep_core::Error::NoSuchTau { .. })
    ));
}

#[test]
fn w_defect_matches_reciprocal_discount_formula() {
    let c = curve(DiscountModel::Hyperbolic { k: 0.2 });
    for (s, t) in [(1, 2), (5, 5), (10, 3), (0, 7)] {
        let f = |u: u64| 1.0 / c.d(u).unwrap();
        let expected = f(s) * f(t) - f(s + t);
        for anchor in [0.5, 1.0, 40.0] {
            let got = w_defect(&c, anchor, s, t).unwrap();
            assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        }
    }
}

#[test]
fn hyperbolic_fit_is_degenerate() {
    let c = curve(DiscountModel::Hyperbolic { k: 0.1 });
    let fit = fit_gamma(&c, 60, 1e-12).unwrap();
    assert!(fit.degenerate);
}

fn log_model() -> ContinuousTimeModel {
    ContinuousTimeModel::LogDelay { k: 0.1, x_bar: 2.0 }
}

#[test]
fn top_amount_has_zero_gamma() {
    let xs = linspace(-2.0, 2.0, 9);
    let c = continuous_gamma_curve(log_model(), &xs, 64, 1e-12).unwrap();
    assert_eq!(c.gamma_at(2.0).unwrap(), 0.0);
    assert_eq!(c.g_at(0.0), 2.0);
}

#[test]
fn gamma_inverts_the_top_amount_curve() {
    let xs = linspace(-2.0, 2.0, 9);
    let tol = 1e-10;
    let c = continuous_gamma_curve(log_model(), &xs, 64, tol).unwrap();
    for t in linspace(0.0, 400.0, 41) {
        // Bisection leaves a bracket of width tol around the root.
        assert!((c.gamma_at(c.g_at(t)).unwrap() - t).abs() <= 2.0 * tol * t.max(1.0));
    }
}

#[test]
fn log_delay_stationarity_defect_has_closed_form() {
    let xs = linspace(-2.0, 2.0, 5);
    let deltas = linspace(0.0, 10.0, 11);
    let c = continuous_gamma_curve(log_model(), &xs, 64, 1e-12).unwrap();
    let eps = measure_eps_stationarity(&c, &xs, &deltas).unwrap();
    // gamma(x) = (e^(x_bar - x) - 1) / k, so delta' = e^(x_bar - x) delta.
    let exact = ((2.0f64 + 2.0).exp() - 1.0) * 10.0;
    assert!((eps.value - exact).abs() <= 1e-6 * exact);
    let lambda = measure_lambda_lipschitz(&log_model(), &xs, &deltas, &deltas);
    // Steepest at t = 0 over the shortest delay: ln(1 + k) / 1.
    assert!((lambda.value - 1.1f64.ln()).abs() < 1e-14);
}

#[test]
fn linear_delay_is_represented_exactly() {
    let model = ContinuousTimeModel::LinearDelay {
        rate: 0.5,
        x_bar: 1.0,
    };
    let xs = linspace(-3.0, 1.0, 17);
    let ts = linspace(0.0, 20.0, 21);
    let c = continuous_gamma_curve(model, &xs, 64, 1e-12).unwrap();
    let eps = measure_eps_stationarity(&c, &xs, &ts).unwrap();
    assert!(eps.value < 1e-9);
    let lambda = measure_lambda_lipschitz(&model, &xs, &ts, &ts);
    assert!((lambda.value - 0.5).abs() < 1e-12);
    let rep = verify_exp3_bound(&c, eps.value, lambda.value, &xs, &ts, 1e-9).unwrap();
    assert!(rep.achieved_distance < 1e-9);
    let (b, tau) = exponential_ordinal_check(&c, &xs, &ts).unwrap();
    assert!((b - 2.0).abs() < 1e-9);
    assert_eq!(tau, 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_is_symmetric(s in 0u64..50, t in 0u64..50, beta in 0.3f64..1.0, k in 0.01f64..2.0) {
        for model in [
            DiscountModel::QuasiHyperbolic { beta, delta: 0.95 },
            DiscountModel::Hyperbolic { k },
        ] {
            let c = curve(model);
            prop_assert_eq!(psi(&c, s, t).unwrap(), psi(&c, t, s).unwrap());
        }
    }

    #[test]
    fn exponential_curves_are_stationary(gamma in 0.05f64..0.999, s in 0u64..50, t in 0u64..50) {
        let c = curve(DiscountModel::Exponential { gamma });
        prop_assert!(psi(&c, s, t).unwrap() <= 1e-12 * (s + t).max(1) as f64);
        prop_assert!((stationarity_ratio(&c, 3.0, s, t).unwrap() - 1.0).abs() <= 1e-10);
        let fit = fit_gamma(&c, 60, 1e-13).unwrap();
        prop_assert!((fit.gamma - gamma).abs() <= 1e-10);
    }

    #[test]
    fn stationarity_ratio_ignores_the_anchor(a in 0.01f64..100.0, s in 0u64..40, t in 0u64..40) {
        let c = curve(DiscountModel::Hyperbolic { k: 0.3 });
        let r1 = stationarity_ratio(&c, a, s, t).unwrap();
        let r2 = stationarity_ratio(&c, 1.0, s, t).unwrap();
        prop_assert!((r1 - r2).abs() <= 1e-12);
    }
}
