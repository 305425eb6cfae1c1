use thiserror::Error;

/// CLI failure, tagged with the process exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad file, bad flag value, or invalid network/APD (exit 2).
    #[error("{0}")]
    Input(String),
    /// Two formula paths disagreed beyond tolerance (exit 3).
    #[error("internal invariant breach: {0}")]
    Invariant(String),
    /// Monte Carlo work would exceed the event budget (exit 4).
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl From<cascade_noise::Error> for CliError {
    fn from(e: cascade_noise::Error) -> Self {
        match e {
            cascade_noise::Error::EventBudget { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
