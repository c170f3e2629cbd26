//! Measuring how far preference models are from exact decision-theoretic
//! axioms, and constructing the nearby exact representations.
//!
//! * [`risk`]: lotteries, mixture-calibrated utility and its affine benchmark.
//! * [`uncertainty`]: acts, the doubling limit to a linear utility, approximate
//!   homogeneity and quasi-concavification.
//! * [`timepref`]: discounting, stationarity violations and exponential
//!   benchmarks in discrete and continuous time.

pub mod error;
pub mod prefcore;
pub mod risk;
pub mod timepref;
pub mod uncertainty;

pub use error::{Error, Result};
