use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown vertex label `{0}`")]
    Label(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("object belongs to a different graph")]
    GraphMismatch,
    #[error("edge set is not an element of the cycle space: vertex `{0}` has odd degree")]
    NotCycleSpaceElement(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("inconsistent constraints: {0}")]
    Constraint(String),
    #[error("malformed script: {0}")]
    Script(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
