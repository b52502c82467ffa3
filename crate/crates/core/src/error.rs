use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input text does not match the expected document structure.
    #[error("schema error: {0}")]
    Schema(String),

    /// A structurally valid input violates a domain invariant.
    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error("config error: {0}")]
    Config(String),

    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no robot with id {0} on our team")]
    UnknownRobot(u32),

    #[error("score undefined for an infeasible candidate")]
    ScoreUndefined,

    #[error("no feasible pass")]
    NoFeasiblePass,

    #[error("point ({x:.3}, {y:.3}) is outside the evaluated region")]
    OutOfRegion { x: f64, y: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
}

impl Error {
    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
