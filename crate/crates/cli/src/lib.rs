//! JSON problem and report schemas for the `atlas` command line, and the
//! dispatch from commands to `atlas-core`.

pub mod error;
pub mod problem;
pub mod report;
pub mod run;

pub use error::CliError;
