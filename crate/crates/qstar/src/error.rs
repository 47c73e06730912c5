use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Core(#[from] qstar_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Bad user input maps to 2; everything else is a failed run.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Json(_) => 2,
            CliError::Core(e) => match e {
                qstar_core::Error::Nonconvergent(_) => 3,
                _ => 2,
            },
            CliError::Io(_) | CliError::Csv(_) => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Pass,
    Inconclusive,
    Failure,
}

impl Outcome {
    pub fn code(self) -> ExitCode {
        ExitCode::from(match self {
            Outcome::Pass => 0,
            Outcome::Failure => 1,
            Outcome::Inconclusive => 3,
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;
