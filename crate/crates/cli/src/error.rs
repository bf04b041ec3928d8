use pauc_core::error::CoreError;
use thiserror::Error;

/// Front-end failure, split by exit code: usage problems (flags, config
/// files, shape mismatches) exit 1, dataset problems exit 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

// Engine errors surface once data and config are already separated, and at
// that point every remaining failure is a configuration that does not fit.
impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Usage(e.to_string())
    }
}
