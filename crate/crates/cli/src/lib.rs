//! Command-line front end for `leafgauge`: fixture files, reports, and dumps.

pub mod commands;
pub mod fixture;
pub mod report;
pub mod run;

use leafgauge::ErrorKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSUMPTION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("verification failed: {0}")]
    Failed(String),
    #[error(transparent)]
    Core(#[from] leafgauge::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Hypothesis(_) => EXIT_ASSUMPTION,
            CliError::Failed(_) => EXIT_NUMERIC,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Assumption => EXIT_ASSUMPTION,
                ErrorKind::Numeric => EXIT_NUMERIC,
                ErrorKind::Input => EXIT_INPUT,
            },
        }
    }
}
