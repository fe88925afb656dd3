use std::fmt;
use std::path::Path;

/// Failure of a CLI run, mapped to exit code 2.
#[derive(Debug)]
pub enum CliError {
    Core(blowup_core::Error),
    Other { kind: &'static str, message: String },
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Other {
            kind: "InvalidConfig",
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Other {
            kind: "Usage",
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Other {
            kind: "Io",
            message: format!("{}: {err}", path.display()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Other { kind, .. } => kind,
        }
    }

    /// `{"error":{"kind":…,"message":…}}` on one line.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Other { message, .. } => f.write_str(message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<blowup_core::Error> for CliError {
    fn from(e: blowup_core::Error) -> Self {
        CliError::Core(e)
    }
}
