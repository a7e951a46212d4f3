use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mismatched ground field: {0}")]
    MismatchedField(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("polynomial {0} is not irreducible")]
    Reducible(String),
    #[error("exponential tail certificate not found with {coefficients} coefficients")]
    CertificateNotFound { coefficients: usize },
    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("malformed JSON input: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
