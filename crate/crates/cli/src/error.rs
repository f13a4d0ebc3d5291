use std::fmt;
use std::io;

/// Failures reported on stderr as one line; each maps to an exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flag combination or a value the parser could not check.
    Usage(String),
    Io { path: String, source: io::Error },
    /// Input that parsed as a flag but is rejected by the library.
    Input {
        origin: String,
        source: metric_embed::Error,
    },
}

impl CliError {
    pub fn status(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Io { .. } | CliError::Input { .. } => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::Input { origin, source } if !origin.starts_with("--") => {
                use metric_embed::Error::*;
                match source {
                    Parse { line, message } => write!(f, "{origin}:{line}: {message}"),
                    DuplicateEdge { line, u, v } => {
                        write!(f, "{origin}:{line}: duplicate edge {u} {v}")
                    }
                    NonPositiveLength { line, length } => write!(
                        f,
                        "{origin}:{line}: edge length must be positive, got {length}"
                    ),
                    other => write!(f, "{origin}: {other}"),
                }
            }
            CliError::Input {
                origin,
                source: metric_embed::Error::Parse { message, .. },
            } => write!(f, "{origin}: {message}"),
            CliError::Input { origin, source } => write!(f, "{origin}: {source}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Attaches the input name to a library error.
pub fn input(origin: impl Into<String>) -> impl FnOnce(metric_embed::Error) -> CliError {
    let origin = origin.into();
    move |source| CliError::Input { origin, source }
}
