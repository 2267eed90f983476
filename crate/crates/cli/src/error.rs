use thiserror::Error;

/// Exit status for a YES answer or a passing check.
pub const EXIT_OK: i32 = 0;
/// Usage and schema errors.
pub const EXIT_INPUT: i32 = 1;
/// Numerical failures inside a computation on valid input.
pub const EXIT_NUMERICAL: i32 = 2;
/// Valid input, answer NO or a failed check.
pub const EXIT_NO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid instance: {0}")]
    Schema(String),
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Schema(_) => EXIT_INPUT,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}
