use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The evaluator has the same sign at both ends of the search interval.
    /// For a preference model this means monotonicity or extremality fails.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("indifference cannot be restored on [0, 1] (target {target})")]
    NoRoot { target: f64 },

    #[error("invalid lottery: {0}")]
    InvalidLottery(String),

    #[error("invalid act: {0}")]
    InvalidAct(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bound violated: distance {distance} exceeds bound {bound} at {witness:?}")]
    BoundViolated {
        distance: f64,
        bound: f64,
        witness: Vec<f64>,
    },

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("iteration did not settle within {n_max} steps (last increments {last_increments:?})")]
    NotConverged {
        n_max: usize,
        last_increments: Vec<f64>,
    },

    #[error(
        "limit is not additive: sum of unit values {sum} differs from value of the unit act {unit}"
    )]
    NotAdditive { sum: f64, unit: f64 },

    #[error("no date up to {horizon} with discount factor at or below {threshold}")]
    NoSuchTau { threshold: f64, horizon: u64 },

    #[error("date {t} lies outside the tabulated horizon {horizon}")]
    OutsideHorizon { t: f64, horizon: usize },

    #[error("linear feasibility solve failed: {0}")]
    InfeasibleLp(String),
}
