use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("family contract violated at degree {degree}: {msg}")]
    FamilyContract { degree: String, msg: String },
    #[error("degree {0} lies outside the enumerated cluster chambers")]
    OutsideClusterChambers(String),
    #[error("degree {0} lies in an unsupported region")]
    UnsupportedRegion(String),
}

impl Error {
    /// Short stable tag used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Usage(_) => "usage",
            Error::Config(_) => "config",
            Error::InvariantViolation(_) => "invariant",
            Error::Parse { .. } => "parse",
            Error::FamilyContract { .. } => "family-contract",
            Error::OutsideClusterChambers(_) => "outside-chambers",
            Error::UnsupportedRegion(_) => "unsupported-region",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
