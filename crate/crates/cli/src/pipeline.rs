//! Measure, construct, verify: one pipeline per domain.

use std::time::Instant;

use nearrep_core::prefcore::{
    linspace, simplex_lattice, ActModel, Cell, ContinuousTimeModel, DiscountModel, Lottery,
    NearRepresentation, RiskModel, Table, ViolationReport, Witness,
};
use nearrep_core::risk::{
    measure_eps_independence, measure_eps_rcl, verify_thm1, verify_thm2, AffineBenchmark,
    MixtureUtility, RiskSampler,
};
use nearrep_core::timepref::{
    continuous_gamma_curve, discount_table, exact_recovery, exponential_ordinal_check, fit_gamma,
    measure_eps_stationarity, measure_lambda_lipschitz, measure_w_axiom, partial_sum_table,
    theta_estimate as time_theta, time_shift_rows, time_shift_table, verify_exp3_bound,
    verify_exp_bound, DiscountCurve,
};
use nearrep_core::uncertainty::{
    extract_prior, measure_eps_ua, quasiconcavify, quasiconcavity_defect, smooth_ambiguity_bound,
    theta_estimate as act_theta, verify_aa_bound, verify_homog_bound, verify_homothetic_exactness,
    verify_quasiconcave_bound, AaBound, ActSampler, ActUtility, CeUtility, LinearBenchmark,
    MAX_HULL_DIM,
};
use nearrep_core::Error as CoreError;

use crate::error::Result;
use crate::report::{RunReport, Source, Status, Verdict};
use crate::scenario::{ModelSpec, Scenario};

pub const RCL_CHECK: &str = "reduction-support-bound";
pub const INDEPENDENCE_CHECK: &str = "independence-square-bound";
pub const DOUBLING_CHECK: &str = "doubling-limit-bound";
pub const HOMOTHETIC_CHECK: &str = "homothetic-exactness";
pub const SMOOTH_CHECK: &str = "smooth-ambiguity-unit-bound";
pub const POWER_CHECK: &str = "power-limit-bound";
pub const HULL_CHECK: &str = "quasiconcave-hull-bound";
pub const HULL_SHAPE_CHECK: &str = "hull-quasiconcavity";
pub const EXPONENTIAL_CHECK: &str = "exponential-discount-bound";
pub const RECOVERY_CHECK: &str = "exact-recovery";
pub const TIME_SHIFT_CHECK: &str = "time-shift-bound";

/// Runs the scenario's pipeline. Bound violations become failed verdicts;
/// only input and numerical errors are returned as `Err`.
pub fn run_scenario(scenario: &Scenario) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new(&scenario.name, Source::Scenario(Box::new(scenario.clone())));
    match &scenario.model {
        ModelSpec::Risk(m) => risk(scenario, m, &mut report)?,
        ModelSpec::Uncertainty(m) => uncertainty(scenario, m, &mut report)?,
        ModelSpec::TimeDiscrete(m) => time_discrete(scenario, m, &mut report)?,
        ModelSpec::TimeContinuous(m) => time_continuous(scenario, m, &mut report)?,
    }
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn record(
    report: &mut RunReport,
    check: &str,
    res: nearrep_core::Result<NearRepresentation>,
) -> Result<()> {
    match res {
        Ok(rep) => {
            report.representation(check, rep);
            Ok(())
        }
        Err(e) => settle(report, check, e),
    }
}

/// Turns a core error into a verdict where it is one.
fn settle(report: &mut RunReport, check: &str, e: CoreError) -> Result<()> {
    match e {
        CoreError::BoundViolated {
            distance,
            bound,
            witness,
        } => report.verdicts.push(Verdict {
            check: check.to_string(),
            status: Status::Fail,
            distance: Some(distance),
            bound: Some(bound),
            detail: format!("distance {distance} exceeds {bound} at {witness:?}"),
        }),
        e @ (CoreError::HypothesisFailed(_)
        | CoreError::NotAdditive { .. }
        | CoreError::NotConverged { .. }
        | CoreError::NoSuchTau { .. }) => {
            report.verdict(check, Status::NotApplicable, e.to_string())
        }
        e => return Err(e.into()),
    }
    Ok(())
}

fn risk(s: &Scenario, model: &RiskModel, report: &mut RunReport) -> Result<()> {
    let tol = s.tolerances.root();
    let sampler = RiskSampler {
        simplex_resolution: s.sampler.resolution.unwrap_or(30),
        pair_resolution: s.sampler.pair_resolution.unwrap_or(6),
        lambda_resolution: s.sampler.lambda_resolution.unwrap_or(10),
        random_pairs: s.sampler.random_pairs.unwrap_or(0),
        seed: s.sampler.seed.unwrap_or(0),
    };
    let u = MixtureUtility::new(model.clone(), tol)?;
    let bench = AffineBenchmark::from_utility(&u);
    report.note(format!("affine coefficients {:?}", bench.coefficients));

    let eps_rcl = report.violation(measure_eps_rcl(&u, &sampler)?);
    record(
        report,
        RCL_CHECK,
        verify_thm1(&u, &bench, eps_rcl, &sampler),
    )?;
    let eps_ind = report.violation(measure_eps_independence(model, &sampler, tol)?);
    record(
        report,
        INDEPENDENCE_CHECK,
        verify_thm2(&u, &bench, eps_ind, &sampler),
    )?;
    report.note(format!(
        "eps is a sample maximum on simplex resolution {}",
        sampler.simplex_resolution
    ));

    let n = u.n_prizes();
    let mut headers: Vec<String> = (1..=n).map(|i| format!("p_{i}")).collect();
    headers.extend(["u", "l", "distance"].map(String::from));
    let mut table = Table::new(&headers.iter().map(String::as_str).collect::<Vec<_>>());
    for p in simplex_lattice(n, sampler.simplex_resolution) {
        let lottery = Lottery::new(p.clone())?;
        let (uv, lv) = (u.eval(&lottery)?, bench.eval(&lottery));
        let mut row: Vec<Cell> = p.into_iter().map(Cell::from).collect();
        row.extend([uv, lv, (uv - lv).abs()].map(Cell::from));
        table.push(row);
    }
    report.table("utility", table);
    Ok(())
}

fn uncertainty(s: &Scenario, model: &ActModel, report: &mut RunReport) -> Result<()> {
    let t = &s.tolerances;
    let n_max = t.series_terms();
    let mut sampler = ActSampler::new(
        s.sampler.bound.unwrap_or(10.0),
        s.sampler.resolution.unwrap_or(21),
    );
    if let Some(r) = s.sampler.pair_resolution {
        sampler.pair_resolution = r;
    }
    if let Some(r) = s.sampler.lambda_resolution {
        sampler.lambda_resolution = r;
    }
    sampler.random_pairs = s.sampler.random_pairs.unwrap_or(0);
    sampler.seed = s.sampler.seed.unwrap_or(0);
    let u = CeUtility::new(model.clone(), t.root())?;

    let theta = act_theta(&u, &sampler, n_max)?;
    let theta_value = report.violation(theta.report.clone());
    report.table(
        "theta-partial-sums",
        partial_sum_table(&theta.witness_partial_sums),
    );
    let mut bench: Option<LinearBenchmark> = None;
    if theta.converged {
        match extract_prior(&u, t.limit(), n_max) {
            Ok(b) => {
                report.note(format!("extracted prior {:?}", b.prior));
                let res = verify_aa_bound(&u, &b, AaBound::Theta(theta_value), &sampler);
                record(report, DOUBLING_CHECK, res)?;
                bench = Some(b);
            }
            Err(e) => settle(report, DOUBLING_CHECK, e)?,
        }
    } else {
        report.verdict(
            DOUBLING_CHECK,
            Status::NotApplicable,
            format!("theta series classified divergent (witness value {theta_value})"),
        );
    }

    if model.is_homothetic() {
        let gap = verify_homothetic_exactness(&u, &sampler, n_max.min(30))?;
        report.note(format!(
            "homothetic model: u equals its doubling limit (max gap {gap})"
        ));
        report.compare(
            HOMOTHETIC_CHECK,
            gap,
            t.slack(),
            "2^-n u(2^n x) = u(x) on the grid",
        );
    }

    if matches!(model, ActModel::SmoothAmbiguity { .. }) {
        match smooth_ambiguity_bound(model, &sampler) {
            Ok(sb) => {
                report.note(format!(
                    "integral utility: defect at zero {}, closed-form gap {}",
                    sb.defect_at_zero, sb.formula_gap
                ));
                report.representation(SMOOTH_CHECK, sb.representation);
            }
            Err(e) => settle(report, SMOOTH_CHECK, e)?,
        }
    }

    if let Some(eta) = s.sampler.eta {
        match verify_homog_bound(&u, eta, &sampler, t.limit(), n_max) {
            Ok(h) => {
                report.violation(ViolationReport {
                    parameter: "theta_power".into(),
                    value: h.theta,
                    witness: Witness::None,
                    samples_evaluated: h.representation.points_checked,
                    tolerance: t.limit(),
                });
                report.note(format!(
                    "power limit homogeneity defect {}",
                    h.homogeneity_defect
                ));
                report.representation(POWER_CHECK, h.representation);
            }
            Err(e) => settle(report, POWER_CHECK, e)?,
        }
    }

    if let Some(res) = s.sampler.hull_resolution {
        if model.dim() > MAX_HULL_DIM {
            report.verdict(
                HULL_CHECK,
                Status::NotApplicable,
                format!("hull construction supports at most {MAX_HULL_DIM} states"),
            );
        } else {
            let hull = quasiconcavify(&u, sampler.bound, res, 0)?;
            let mut meter = sampler;
            meter.resolution = res;
            let eps = report.violation(measure_eps_ua(&u, &meter, &hull.chain_triples())?);
            record(report, HULL_CHECK, verify_quasiconcave_bound(&hull, eps))?;
            let defect = quasiconcavity_defect(&hull, &meter)?;
            report.compare(
                HULL_SHAPE_CHECK,
                defect,
                hull.level_spacing() + t.slack(),
                "hull is quasi-concave up to the level spacing",
            );
        }
    }

    let d = model.dim();
    let mut headers: Vec<String> = (1..=d).map(|i| format!("x_{i}")).collect();
    headers.push("u".into());
    if bench.is_some() {
        headers.extend(["v", "distance"].map(String::from));
    }
    let mut table = Table::new(&headers.iter().map(String::as_str).collect::<Vec<_>>());
    for x in sampler.points(d) {
        let uv = u.eval(&x)?;
        let mut row: Vec<Cell> = x.payoffs().iter().copied().map(Cell::from).collect();
        row.push(uv.into());
        if let Some(b) = &bench {
            let v = b.eval(&x);
            row.extend([v, (uv - v).abs()].map(Cell::from));
        }
        table.push(row);
    }
    report.table("grid", table);
    Ok(())
}

fn time_discrete(s: &Scenario, model: &DiscountModel, report: &mut RunReport) -> Result<()> {
    let t = &s.tolerances;
    let n_max = t.series_terms();
    let curve = DiscountCurve::new(model.clone(), s.sampler.resolution.unwrap_or(100))?;
    let dates: Vec<u64> = (1..=curve.horizon as u64).collect();

    let theta = time_theta(&curve, &dates, n_max)?;
    let theta_value = report.violation(theta.report.clone());
    report.table(
        "theta-partial-sums",
        partial_sum_table(&theta.witness_partial_sums),
    );
    let gamma = match fit_gamma(&curve, n_max, t.limit()) {
        Ok(fit) => {
            if fit.degenerate {
                report.note("fitted gamma is one: the benchmark does not discount");
            }
            report.note(format!("fitted gamma {}", fit.gamma));
            Some(fit.gamma)
        }
        Err(e) => {
            settle(report, EXPONENTIAL_CHECK, e)?;
            None
        }
    };
    if let Some(gamma) = gamma {
        if theta.converged {
            let res = verify_exp_bound(&curve, gamma, theta_value, &dates);
            record(report, EXPONENTIAL_CHECK, res)?;
        } else {
            report.verdict(
                EXPONENTIAL_CHECK,
                Status::NotApplicable,
                "theta series classified divergent",
            );
        }
        report.table("discount", discount_table(&curve, gamma, theta_value)?);
    }

    let w = report.violation(measure_w_axiom(&curve, 1.0)?);
    let w_bound = t.w_bound.unwrap_or(w);
    match exact_recovery(&curve, w_bound) {
        Ok(rec) => {
            report.note(format!(
                "recovery: tau {}, gamma {}, max |d(t) - gamma^t| {} at t = {}",
                rec.tau, rec.gamma, rec.defect, rec.defect_at
            ));
            // The recipe is exact only for exactly stationary curves.
            if theta_value <= t.slack() {
                report.compare(
                    RECOVERY_CHECK,
                    rec.defect,
                    t.slack(),
                    format!("gamma = d(tau)^(1/tau) with tau = {}", rec.tau),
                );
            }
        }
        Err(e) => {
            if theta_value <= t.slack() {
                settle(report, RECOVERY_CHECK, e)?;
            } else {
                report.note(format!("recovery: {e}"));
            }
        }
    }
    Ok(())
}

fn time_continuous(
    s: &Scenario,
    model: &ContinuousTimeModel,
    report: &mut RunReport,
) -> Result<()> {
    let t = &s.tolerances;
    let x_bar = model.x_bar();
    let xs = linspace(
        s.sampler.x_min.unwrap_or(x_bar - 4.0),
        x_bar,
        s.sampler.amounts.unwrap_or(21),
    );
    let points = s.sampler.resolution.unwrap_or(41);
    let ts = linspace(0.0, s.sampler.t_max.unwrap_or(20.0), points);
    let curve = continuous_gamma_curve(*model, &xs, points, t.root())?;

    let eps = report.violation(measure_eps_stationarity(&curve, &xs, &ts)?);
    let lambda = report.violation(measure_lambda_lipschitz(model, &xs, &ts, &ts));
    record(
        report,
        TIME_SHIFT_CHECK,
        verify_exp3_bound(&curve, eps, lambda, &xs, &ts, t.slack()),
    )?;
    let (b, tau) = exponential_ordinal_check(&curve, &xs, &ts)?;
    report.note(format!(
        "ordinal agreement with X exp(-t / {b}): Kendall tau {tau}"
    ));
    let rows = time_shift_rows(&curve, &xs, &ts)?;
    report.table("time-shift", time_shift_table(&rows, lambda * eps));
    Ok(())
}
