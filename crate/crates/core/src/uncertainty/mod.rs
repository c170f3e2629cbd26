//! Choice under uncertainty: certainty-equivalent utility on acts, the
//! doubling and power limits, prior extraction, and the quasi-concave hull
//! benchmark.

pub mod additivity;
pub mod homog;
pub mod hull;
pub mod quasi;
pub mod utility;

pub use additivity::{
    dyadic_series, extract_prior, hyers_ulam_limit, measure_phi, smooth_ambiguity_bound,
    theta_estimate, theta_pairs, verify_aa_bound, verify_homothetic_exactness, AaBound,
    DoublingLimit, LinearBenchmark, SmoothBound, ThetaReport, ADDITIVITY_TOL, SCALE_GUARD,
};
pub use homog::{
    homog_limit, measure_homog_deviation, verify_homog_bound, HomogCheck, HomogLimit,
    HOMOGENEITY_PROBES,
};
pub use hull::{hull_weights, LP_TOL};
pub use quasi::{
    measure_eps_ua, quasiconcavify, quasiconcavity_defect, ua_defect, ua_triples,
    verify_quasiconcave_bound, ActTriple, QuasiConcaveBenchmark, MAX_HULL_DIM,
};
pub use utility::{ce_utility, ActSampler, ActUtility, CeUtility, IntegralUtility, CE_TOL};
