//! Front end for `casimir-core`: JSON run configurations, parameter sweeps,
//! SI conversion and CSV/JSON output.

pub mod args;
pub mod config;
pub mod error;
pub mod run;
pub mod units;

pub use config::RunConfig;
pub use error::CliError;
