//! CLI error type with a stable exit-code contract:
//! 0 success, 2 input error, 3 infeasible target, 4 scale refusal,
//! 1 anything else (verification failure, I/O, internal inconsistency).

use thiserror::Error;

use qadapt_core::allocation::AllocationError;
use qadapt_core::delivery::DeliveryError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("infeasible target: {0}")]
    Infeasible(String),
    #[error("{0}")]
    Scale(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Scale(_) => 4,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<qadapt_core::ModelError> for CliError {
    fn from(e: qadapt_core::ModelError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<qadapt_core::ParseRationalError> for CliError {
    fn from(e: qadapt_core::ParseRationalError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<AllocationError> for CliError {
    fn from(e: AllocationError) -> Self {
        match e {
            AllocationError::InfeasibleTarget(msg) => CliError::Infeasible(msg),
            AllocationError::Model(m) => CliError::Input(m.to_string()),
            other @ AllocationError::NonMonotone { .. } => CliError::Failed(other.to_string()),
        }
    }
}

impl From<DeliveryError> for CliError {
    fn from(e: DeliveryError) -> Self {
        CliError::Scale(e.to_string())
    }
}

impl From<qadapt_core::PowerError> for CliError {
    fn from(e: qadapt_core::PowerError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
