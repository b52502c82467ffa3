use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Planner(#[from] sslplan::Error),

    #[error("benchmark failure: {0}")]
    Bench(String),

    #[error("malformed heatmap CSV: {0}")]
    Csv(String),
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 0 success, 1 usage, 2 schema or validation, 3 config, 4 internal.
    pub fn exit_code(&self) -> u8 {
        use sslplan::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Planner(e) => match e {
                E::Schema(_) | E::Validation { .. } | E::DegenerateGeometry(_) | E::OutOfRegion { .. } => 2,
                E::Config(_) => 3,
                E::UnknownRobot(_) | E::Domain(_) => 1,
                E::ScoreUndefined | E::NoFeasiblePass => 4,
            },
            CliError::Csv(_) => 2,
            CliError::Bench(_) => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
