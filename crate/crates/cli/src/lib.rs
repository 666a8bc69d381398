//! Verification suites, counts, tables and figures behind the `klo` binary.

pub mod commands;
pub mod config;
pub mod figure;
pub mod report;
pub mod suites;

pub use config::{ConfigError, Format, RunConfig};
pub use report::{Check, Report, Status};
pub use suites::Suite;
