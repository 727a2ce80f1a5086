use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("inconsistent data: {0}")]
    InconsistentData(String),
    #[error("not reducible: {0}")]
    NotReducible(String),
    #[error("not invertible on annulus: {0}")]
    NotInvertible(String),
    #[error("orbit collision: {0}")]
    OrbitCollision(String),
    #[error("no stabilization: {0}")]
    NonConvergence(String),
    #[error("inconsistent lift data: {0}")]
    InconsistentLift(String),
    #[error("residue/hurewicz mismatch: {0}")]
    Mismatch(String),
    #[error("element is not in K_2: nontrivial tame symbols at {0:?}")]
    NotInK2(Vec<String>),
    #[error("parse error in {path}: {msg}")]
    Parse { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
