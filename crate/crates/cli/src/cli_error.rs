use std::fmt;

/// CLI-level failure, mapped onto the documented exit codes:
/// 2 configuration, 3 numerical non-convergence, 4 fit failure, 1 I/O.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Lib(decaylaw::Error),
    Io(std::io::Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Lib(decaylaw::Error::Invalid(_)) => 2,
            CliError::Lib(decaylaw::Error::Convergence { .. }) => 3,
            CliError::Lib(decaylaw::Error::Fit(_)) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<decaylaw::Error> for CliError {
    fn from(e: decaylaw::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
