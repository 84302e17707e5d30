use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    /// The report was written; some rows missed their published targets.
    #[error("reproduction failed: {0}")]
    Reproduction(String),

    /// The report was written; the optimizer did not converge.
    #[error("{0}")]
    Convergence(String),
}

impl CliError {
    pub const REPRODUCTION: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const CONVERGENCE: u8 = 3;

    pub fn code(&self) -> u8 {
        match self {
            CliError::Reproduction(_) => Self::REPRODUCTION,
            CliError::Input(_) | CliError::Io(_) => Self::INPUT,
            CliError::Convergence(_) => Self::CONVERGENCE,
        }
    }
}

impl From<tgiw::Error> for CliError {
    fn from(e: tgiw::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("serialization failed: {e}"))
    }
}
