//! Dated rewards: stationarity defects, exponential benchmarks for discount
//! factors, and the time-shift representation in continuous time.

pub mod continuous;
pub mod discrete;

pub use continuous::{
    continuous_gamma_curve, exponential_ordinal_check, kendall_tau, measure_eps_stationarity,
    measure_lambda_lipschitz, time_shift_rows, time_shift_table, verify_exp3_bound, GammaCurve,
    TimeShiftRow,
};
pub use discrete::{
    discount_table, exact_recovery, fit_gamma, measure_w_axiom, partial_sum_table, psi,
    stationarity_ratio, theta_estimate, theta_series, verify_exp_bound, w_defect, DiscountCurve,
    ExactRecovery, GammaFit, TimeThetaReport, DEGENERATE_GAMMA_TOL, EXACTNESS_TOL,
};
