use psa_core::approx::ApproxError;
use psa_core::fixedpoint::FixedPointError;
use psa_core::nep::NepError;
use psa_core::numkernel::KernelError;
use psa_core::oracle::OracleError;
use psa_core::problems::ProblemError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("bad problem specification: {0}")]
    Spec(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    FixedPoint(#[from] FixedPointError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Nep(#[from] NepError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("malformed record: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
