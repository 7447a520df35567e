use thiserror::Error;

#[derive(Error, Debug)]
pub enum RlabError {
    #[error("algebra error: {0}")]
    Algebra(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, RlabError>;
