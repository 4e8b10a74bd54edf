use nonlocal_cast::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for usage and parse errors, 3 for unphysical input, 4 for I/O,
    /// 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Csv(_) => 4,
            CliError::Core(e) => match e {
                Error::InvalidState(_) | Error::UnphysicalTriple { .. } => 3,
                Error::Io(_) => 4,
                Error::Json(_)
                | Error::InvalidSpec(_)
                | Error::OutOfRange(_)
                | Error::SettingsCount(_)
                | Error::InvalidSettings(_)
                | Error::PauliIndex(_)
                | Error::Hypothesis(_) => 2,
                _ => 1,
            },
        }
    }
}
