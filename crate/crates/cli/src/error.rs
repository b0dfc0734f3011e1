use std::fmt;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    Usage = 1,
    Hypothesis = 2,
    Numeric = 3,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable or malformed input.
    Input(String),
    Library(stieltjes::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::Usage,
            CliError::Library(e) if e.is_hypothesis() => ExitCode::Hypothesis,
            CliError::Library(e) if e.is_numeric() => ExitCode::Numeric,
            CliError::Library(_) => ExitCode::Usage,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<stieltjes::Error> for CliError {
    fn from(e: stieltjes::Error) -> Self {
        CliError::Library(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
