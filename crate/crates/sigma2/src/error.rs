use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("numerical failure: {msg} (error estimate {estimate:e})")]
    NumericalFailure { msg: String, estimate: f64 },
    #[error("argument {0} is a pole (lattice point)")]
    PoleAtArgument(String),
    #[error("ambiguous classification: {0}")]
    AmbiguousClassification(String),
    #[error("parameters are not on the requested stratum: {0}")]
    NotOnStratum(String),
    #[error("singular configuration: {0}")]
    SingularConfiguration(String),
    #[error("double point is not a branch point of the elliptic curve")]
    NotBranchPoint,
    #[error("lattice is not real rectangular")]
    NotRealLattice,
    #[error("alpha is not on a segment where the potential is real")]
    NotRealAlpha,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn numerical(msg: impl Into<String>, estimate: f64) -> Self {
        Error::NumericalFailure {
            msg: msg.into(),
            estimate,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
