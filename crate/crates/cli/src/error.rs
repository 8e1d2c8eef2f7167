use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] linewalker::Error),

    #[error(transparent)]
    Run(#[from] linewalker::RunError),

    #[error(transparent)]
    Eval(#[from] linewalker::EvalError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("artifact {path} differs between two identical runs")]
    Nondeterministic { path: PathBuf },

    #[error("{failed} of {total} suite instances failed")]
    SuiteFailures { failed: usize, total: usize },

    /// A run failed; `artifact` holds the trace up to the failure.
    #[error("{source}")]
    Partial {
        artifact: Box<crate::artifacts::Artifact>,
        source: Box<CliError>,
    },

    #[error("malformed artifact: {0}")]
    Malformed(String),
}

impl CliError {
    /// 1 for bad invocations, 2 for everything that went wrong while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(linewalker::Error::UnknownFunction(_)) => 1,
            CliError::Partial { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
