use thiserror::Error;

use crate::graph::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid inverse graph:\n{0}")]
    InvalidGraph(ValidationReport),
    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),
    #[error("invalid machine: {0}")]
    InvalidPda(String),
    #[error("invalid transducer: {0}")]
    InvalidTransducer(String),
    #[error("invalid assembly: {0}")]
    InvalidAssembly(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("answer would depend on vertices beyond the trusted ball: {0}")]
    InsufficientBall(String),
    #[error("word not accepted: {0}")]
    NotAccepted(String),
    #[error("morphism is not a cover at `{0}`")]
    NotACover(String),
    #[error("{0}")]
    Invalid(String),
}
