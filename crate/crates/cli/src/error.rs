use atlas_core::AtlasError;
use thiserror::Error;

/// Failure of a command, one variant per exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    /// Exit code 2: unreadable file, schema violation, malformed value.
    #[error("input error: {0}")]
    Input(String),
    /// Exit code 3: a mathematical precondition does not hold.
    #[error("precondition error: {0}")]
    Precondition(String),
    /// Exit code 4: a checked property failed.
    #[error("property failure: {0}")]
    Property(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Property(_) => 4,
        }
    }
}

impl From<AtlasError> for CliError {
    fn from(e: AtlasError) -> Self {
        match e {
            AtlasError::Input(m) | AtlasError::Mismatch(m) => CliError::Input(m),
            AtlasError::Domain(m) | AtlasError::Precondition(m) => CliError::Precondition(m),
            AtlasError::Solver(m) => CliError::Property(m),
        }
    }
}
