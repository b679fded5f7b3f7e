use crate::solver::SolveResult;

/// Errors produced by any module of this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A model is structurally invalid (dimension mismatch, bad bounds, ...).
    #[error("model error: {0}")]
    Model(String),

    /// The solver failed numerically (e.g. cycling beyond the iteration cap).
    #[error("solver failure: {0}")]
    SolverFailure(String),

    /// A configured resource limit was exhausted. For MILP solves the best
    /// incumbent found so far is attached.
    #[error("resource limit exhausted: {message}")]
    Resource {
        message: String,
        incumbent: Option<Box<SolveResult>>,
    },

    /// An argument is outside its documented domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A fixture name was not recognized.
    #[error("unknown fixture: {0}")]
    FixtureLookup(String),

    /// A file could not be parsed into the expected schema.
    #[error("parse error: {0}")]
    Parse(String),

    /// Required columns are missing from a result table.
    #[error("schema error: {0}")]
    Schema(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn model(msg: impl Into<String>) -> Error {
        Error::Model(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Error {
        Error::Parameter(msg.into())
    }
}
