//! Library side of the `psa` command: problem specifications, run records,
//! the dispatcher that executes one run, and boundary tracing.

pub mod boundary;
pub mod error;
pub mod genspec;
pub mod record;
pub mod runner;

pub use error::CliError;
pub use genspec::GenSpec;
pub use record::{Complex, RunRecord, RunStatus};
pub use runner::{Algorithm, OracleKind, Problem, RunOptions};
