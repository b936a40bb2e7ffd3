use std::fmt;
use std::path::Path;

/// Process exit status of a failed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    /// The numerics failed: singular systems, divergence, empty splits.
    Numerical = 1,
    /// Files, schemas and configuration.
    Io = 2,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Io,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Numerical,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.kind as u8
    }

    /// Prefixes the message with some context, keeping the kind.
    pub fn context(self, what: impl fmt::Display) -> Self {
        Self {
            kind: self.kind,
            message: format!("{what}: {}", self.message),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<asv_gain::Error> for CliError {
    fn from(e: asv_gain::Error) -> Self {
        match e {
            asv_gain::Error::InvalidArgument(_) => CliError::io(e.to_string()),
            _ => CliError::numerical(e.to_string()),
        }
    }
}

/// Error for a failed file operation, naming the file.
pub fn file_error(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::io(format!("{}: {e}", path.display()))
}

pub trait ResultExt<T> {
    fn at(self, path: &Path) -> CliResult<T>;
}

impl<T, E: fmt::Display> ResultExt<T> for std::result::Result<T, E> {
    fn at(self, path: &Path) -> CliResult<T> {
        self.map_err(|e| file_error(path, e))
    }
}
