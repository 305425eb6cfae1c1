use thiserror::Error;

use crate::network::Violation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid network: {}", join_violations(.0))]
    InvalidNetwork(Vec<Violation>),

    #[error("stage index {index} out of range 1..={stages}")]
    StageOutOfRange { index: usize, stages: usize },

    #[error("ratio must be > 0 to convert to decibels, got {0}")]
    NonPositiveRatio(f64),

    #[error("invalid staircase APD: {0}")]
    InvalidApd(String),

    #[error("ionization probability must lie in [0, 1], got {0}")]
    ProbabilityOutOfRange(f64),

    #[error("Monte Carlo needs at least one trial")]
    ZeroTrials,

    #[error("Monte Carlo needs at least one worker")]
    ZeroWorkers,

    #[error(
        "Monte Carlo event budget exceeded: {requested:.3e} carrier draws requested, budget is {budget:.0e}"
    )]
    EventBudget { requested: f64, budget: f64 },

    #[error("scenario {scenario}: {reason}")]
    Scenario {
        scenario: &'static str,
        reason: String,
    },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
