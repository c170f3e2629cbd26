//! Scenario files, pipelines and report writing behind the `nearrep`
//! binary.

pub mod builtin;
pub mod error;
pub mod pipeline;
pub mod report;
pub mod scenario;

pub use error::{CliError, Result};
pub use report::{RunReport, Status};
pub use scenario::{Overrides, Scenario};
