use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),
    #[error("sigma sets overlap at {0:?}")]
    OverlappingSigma(Vec<usize>),
    #[error("invalid sigma set: {0}")]
    InvalidSigma(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// Whether the error stems from bad user input rather than a failed verification.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidRootSystem(_)
                | Error::OverlappingSigma(_)
                | Error::InvalidSigma(_)
                | Error::Params(_)
                | Error::Input(_)
                | Error::Precondition(_)
        )
    }
}
