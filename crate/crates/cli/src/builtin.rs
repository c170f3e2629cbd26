//! Pinned scenarios with the canonical parameters.

use std::time::Instant;

use nearrep_core::prefcore::{ActModel, Attitude, DiscountModel};
use nearrep_core::risk::{allais_report, figure1_data, CptParams};
use serde_json::json;

use crate::error::{CliError, Result};
use crate::pipeline::run_scenario;
use crate::report::{RunReport, Source, Status};
use crate::scenario::{ModelSpec, Overrides, Scenario};

/// `(name, description)` of every builtin.
pub const BUILTINS: [(&str, &str); 4] = [
    (
        "allais",
        "common-ratio pattern under power value 0.54 and weighting 0.74",
    ),
    (
        "figure1",
        "max |w(p) - p| of the 0.74 weighting on a 1e-5 grid with refinement",
    ),
    (
        "smooth-bound",
        "smooth ambiguity, both attitudes, two priors: sup |u - v| <= 1",
    ),
    (
        "quasi-hyperbolic",
        "beta = 0.9, delta = 0.95: theta, fitted gamma and the tight bound",
    ),
];

pub const ALLAIS_CHECK: &str = "allais-pattern";
pub const BRACKET_CHECK: &str = "indifference-bracket";
pub const WEIGHTING_CHECK: &str = "weighting-deviation";

/// Default points of the weighting curve: a 1e-5 grid.
pub const FIGURE1_RESOLUTION: usize = 100_001;
pub const FIGURE1_BOUND: f64 = 0.1;

pub fn run_builtin(name: &str, overrides: Overrides) -> Result<Vec<RunReport>> {
    match name {
        "allais" => Ok(vec![allais()?]),
        "figure1" => Ok(vec![figure1(overrides.grid.unwrap_or(FIGURE1_RESOLUTION))?]),
        "smooth-bound" => smooth_bound_scenarios()
            .into_iter()
            .map(|mut s| {
                s.apply(overrides);
                run_scenario(&s)
            })
            .collect(),
        "quasi-hyperbolic" => {
            let mut s = quasi_hyperbolic_scenario();
            s.apply(overrides);
            Ok(vec![run_scenario(&s)?])
        }
        _ => Err(CliError::UnknownBuiltin {
            name: name.to_string(),
            available: BUILTINS.map(|b| b.0).join(", "),
        }),
    }
}

fn allais() -> Result<RunReport> {
    let start = Instant::now();
    let params = CptParams::default();
    let mut report = RunReport::new(
        "allais",
        Source::Builtin {
            name: "allais".into(),
            parameters: json!(params),
        },
    );
    let a = allais_report(params)?;
    report.note(format!(
        "U(A) = {}, U(B) = {}, U(C) = {}, U(D) = {}, U(0.27 B) = {}",
        a.u_a, a.u_b, a.u_c, a.u_d, a.u_d_amended
    ));
    report.verdict(
        ALLAIS_CHECK,
        if a.pattern_holds() {
            Status::Pass
        } else {
            Status::Fail
        },
        format!(
            "U(B) > U(A): {}, U(C) > U(D): {}, U(0.27 B) > U(C): {}",
            a.b_over_a, a.c_over_d, a.amended_over_c
        ),
    );
    let in_bracket = a.lambda_star > 0.25 && a.lambda_star < 0.27;
    report.verdict(
        BRACKET_CHECK,
        if in_bracket {
            Status::Pass
        } else {
            Status::Fail
        },
        format!("lambda* = {} in (0.25, 0.27)", a.lambda_star),
    );
    report.table("allais", a.table());
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn figure1(resolution: usize) -> Result<RunReport> {
    if resolution < 1001 {
        return Err(CliError::Config(format!(
            "figure1 needs at least 1001 points, got {resolution}"
        )));
    }
    let start = Instant::now();
    let b = CptParams::default().weight_exponent;
    let mut report = RunReport::new(
        "figure1",
        Source::Builtin {
            name: "figure1".into(),
            parameters: json!({ "weight_exponent": b, "resolution": resolution }),
        },
    );
    let fig = figure1_data(resolution, b);
    report.samples_evaluated = resolution;
    report.compare(
        WEIGHTING_CHECK,
        fig.max_deviation,
        FIGURE1_BOUND,
        format!(
            "max |w(p) - p| = {} at p = {}",
            fig.max_deviation, fig.argmax
        ),
    );
    report.table("figure1", fig.table);
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// The two-state, two-prior smooth model with equal weights.
pub fn smooth_model(f: Attitude) -> ActModel {
    ActModel::SmoothAmbiguity {
        f,
        priors: vec![vec![0.3, 0.7], vec![0.8, 0.2]],
        weights: vec![0.5, 0.5],
    }
}

pub fn smooth_bound_scenarios() -> Vec<Scenario> {
    [
        ("smooth-bound-sqrt1pz2", Attitude::Sqrt1pz2),
        ("smooth-bound-z_minus_exp", Attitude::ZMinusExp),
    ]
    .into_iter()
    .map(|(name, f)| {
        let mut s = Scenario::new(name, ModelSpec::Uncertainty(smooth_model(f)));
        s.sampler.bound = Some(10.0);
        s.sampler.resolution = Some(50);
        s
    })
    .collect()
}

pub fn quasi_hyperbolic_scenario() -> Scenario {
    let mut s = Scenario::new(
        "quasi-hyperbolic",
        ModelSpec::TimeDiscrete(DiscountModel::QuasiHyperbolic {
            beta: 0.9,
            delta: 0.95,
        }),
    );
    s.sampler.resolution = Some(100);
    s
}
