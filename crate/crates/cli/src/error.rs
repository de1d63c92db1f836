use std::fmt;

use serde_json::json;

/// Failure of a CLI invocation, split by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or configuration: exit 2.
    Usage(String),
    /// A library operation failed: exit 1.
    Numerical(sagnac::Error),
    /// Writing an artifact failed: exit 1.
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }

    /// One-line JSON diagnostic for stderr.
    pub fn diagnostic(&self) -> String {
        let (class, kind) = match self {
            CliError::Usage(_) => ("usage", "InvalidArgument".to_string()),
            CliError::Numerical(e) => ("numerical", variant_name(e)),
            CliError::Io(_) => ("io", "Io".to_string()),
        };
        json!({ "error": class, "kind": kind, "message": self.to_string() }).to_string()
    }
}

fn variant_name(e: &sagnac::Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("Error")
        .to_string()
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Numerical(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<sagnac::Error> for CliError {
    fn from(e: sagnac::Error) -> Self {
        CliError::Numerical(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
