//! Shared types, preference models and numerical utilities.

pub mod act_model;
pub mod grid;
pub mod report;
pub mod risk_model;
pub mod root;
pub mod series;
pub mod table;
pub mod time_model;
pub mod types;

pub use act_model::{ActModel, Attitude};
pub use grid::{grid_sample, linspace, simplex_compositions, simplex_lattice, Sampler, Space};
pub use report::{NearRepresentation, RepresentationKind, ViolationReport, Witness};
pub use risk_model::{power_value, tk_weight, RiskModel, SimplexTable};
pub use root::{bisect_monotone, nearest_root, DEFAULT_TOL};
pub use series::{cauchy_limit, dyadic_tail_sum, LimitEstimate, SeriesSum, DEFAULT_RATIO_TOL};
pub use table::{Cell, Table};
pub use time_model::{ContinuousTimeModel, DiscountModel};
pub use types::{Act, DatedReward, Lottery};

/// Slack allowed on sup-norm bound checks.
pub const BOUND_SLACK: f64 = 1e-7;

/// Margin that turns the strict inequalities of the relaxed axioms into
/// floating point comparisons.
pub const STRICT_MARGIN: f64 = 1e-12;
