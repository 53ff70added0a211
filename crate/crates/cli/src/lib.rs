//! Verification suite and command implementations behind the `sigma-lab`
//! binary.

pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod oracle;
pub mod report;
pub mod suite;

pub use config::SuiteConfig;
pub use error::CliError;
pub use report::{CheckRecord, Report};
pub use suite::run_suite;
