use crate::poly::Var;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppellError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degree {requested} requested but only {available} is available")]
    OutOfRange { requested: usize, available: usize },
    #[error("substituted expression must not contain variable {0}")]
    SelfReferentialShift(Var),
    #[error("both families use argument variable {0}")]
    SharedArgument(Var),
    #[error("variable {0} is unbound")]
    Unbound(Var),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = AppellError> = std::result::Result<T, E>;
