use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: delta = {delta} must exceed -m = -{m}")]
    Domain { delta: f64, m: u32 },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("simplex {simplex:?} is missing its face {face:?}")]
    MissingFace { simplex: Vec<u32>, face: Vec<u32> },

    #[error("not a subcomplex: simplex {0:?} is absent from the ambient complex")]
    NotSubcomplex(Vec<u32>),

    #[error("unknown vertex {0}")]
    UnknownVertex(u32),

    #[error("ordering violation: {0}")]
    Ordering(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("insufficient points for a fit: need {need}, have {have}")]
    InsufficientPoints { need: usize, have: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Budget exhaustion is the one failure mode a sweep records instead of aborting on.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
