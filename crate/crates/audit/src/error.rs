use std::path::PathBuf;

/// Errors surfaced by the audit tool. All of them map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum AuditError {
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(berezin::Error),
}

impl From<berezin::Error> for AuditError {
    fn from(e: berezin::Error) -> Self {
        AuditError::Core(e)
    }
}

impl AuditError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AuditError::Io { path: path.into(), source }
    }
}

pub type Result<T, E = AuditError> = std::result::Result<T, E>;
