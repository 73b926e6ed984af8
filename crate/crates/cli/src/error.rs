use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Data {
        context: String,
        #[source]
        source: wetlab_ner::Error,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Data { source, .. } => match source {
                wetlab_ner::Error::Config(_) => 1,
                wetlab_ner::Error::Invariant(_) => 3,
                _ => 2,
            },
            CliError::Invariant(_) => 3,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attaches a context string to library errors.
pub trait Context<T> {
    fn context(self, context: impl FnOnce() -> String) -> CliResult<T>;
}

impl<T> Context<T> for wetlab_ner::Result<T> {
    fn context(self, context: impl FnOnce() -> String) -> CliResult<T> {
        self.map_err(|source| CliError::Data {
            context: context(),
            source,
        })
    }
}

impl<T> Context<T> for CliResult<T> {
    fn context(self, context: impl FnOnce() -> String) -> CliResult<T> {
        self.map_err(|e| match e {
            CliError::Data {
                context: inner,
                source,
            } => CliError::Data {
                context: format!("{}: {inner}", context()),
                source,
            },
            CliError::Invariant(m) => CliError::Invariant(format!("{}: {m}", context())),
            CliError::Usage(m) => CliError::Usage(format!("{}: {m}", context())),
            io @ CliError::Io { .. } => io,
        })
    }
}
