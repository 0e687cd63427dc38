//! Error-to-exit-code mapping: 1 validation, 2 numerical, 3 I/O.

use std::fmt;

use mimo_crlb::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, malformed files, or inputs outside the domain.
    Validation(String),
    /// The computation itself failed (singular Fisher information).
    Numerical(String),
    /// Reading or writing a file failed.
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Numerical(msg) | CliError::Io(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::SingularFim => CliError::Numerical("singular Fisher information".into()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}
