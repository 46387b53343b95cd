//! Command-line error type and exit-code mapping.

use std::fmt;

use paca_core::automaton::CaError;
use paca_core::langs::LangError;
use paca_core::prob::ProbError;
use paca_core::transforms::TransformError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Format(String),
    Budget(String),
    Io(std::io::Error),
}

impl CliError {
    /// 3 = usage/format, 4 = budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Format(_) | CliError::Io(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Format(msg) => write!(f, "format: {msg}"),
            CliError::Budget(msg) => write!(f, "budget: {msg}"),
            CliError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Io(e)
    }
}

impl From<CaError> for CliError {
    fn from(e: CaError) -> CliError {
        CliError::Format(e.to_string())
    }
}

impl From<ProbError> for CliError {
    fn from(e: ProbError) -> CliError {
        match e {
            ProbError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> CliError {
        match e {
            TransformError::SizeBudget { .. } => CliError::Budget(e.to_string()),
            TransformError::Prob(ProbError::BudgetExceeded { .. }) => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<LangError> for CliError {
    fn from(e: LangError) -> CliError {
        match e {
            LangError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}
