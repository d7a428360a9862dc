use thiserror::Error;

use crate::witness::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    #[error("duplicate label `{0}`")]
    LabelCollision(String),

    #[error("index {index} out of bounds (size {size})")]
    IndexOutOfBounds { index: usize, size: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid value: {0}")]
    Invalid(String),

    #[error("not a stochastic channel: {0}")]
    NotStochastic(String),

    #[error("channel does not preserve the uniform distribution")]
    NotUniformPreserving,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("search space of {size} exceeds cap {cap}")]
    Explosion { size: u128, cap: u128 },

    #[error("constraint not satisfied: {0}")]
    Unsatisfied(Violation),

    #[error("`{0}` is not supported by this encoding")]
    Unsupported(&'static str),

    #[error("not a relaxation: {0}")]
    NotARelaxation(String),

    #[error("unchecked pair used in composition")]
    Unchecked,

    #[error("laxity violated: {0}")]
    LaxityViolated(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An error inside a circuit, with the path of the node that raised it.
    #[error("at {path}: {source}")]
    Located { path: String, source: Box<Error> },
}

impl Error {
    pub fn at(self, path: impl Into<String>) -> Error {
        match self {
            located @ Error::Located { .. } => located,
            other => Error::Located {
                path: path.into(),
                source: Box::new(other),
            },
        }
    }

    /// The error with any location stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Located { source, .. } => source.root(),
            other => other,
        }
    }

    /// Whether this reports a failed constraint rather than bad input.
    pub fn is_violation(&self) -> bool {
        matches!(
            self.root(),
            Error::Unsatisfied(_) | Error::LaxityViolated(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_index(index: usize, size: usize) -> Result<()> {
    if index < size {
        Ok(())
    } else {
        Err(Error::IndexOutOfBounds { index, size })
    }
}
