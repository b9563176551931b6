use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Conditioning removed every event from the sample space.
    #[error("degenerate scenario: {0}")]
    DegenerateScenario(String),
    /// The requested units cannot be computed from what the player knows.
    #[error("units unavailable: {0}")]
    UnitUnavailable(String),
    #[error("rejection sampling gave up after {attempts} attempts")]
    RejectionLimit { attempts: u32 },
    #[error("cannot parse amount `{0}`")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
