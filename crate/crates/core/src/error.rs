use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: ring has {expected} variables, found index {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {0} is out of range")]
    IndexOutOfRange(usize),

    #[error("a tree node cannot be labeled with the zero derivation")]
    ZeroLabel,

    #[error("node path {0:?} does not resolve in this tree")]
    InvalidPath(Vec<usize>),

    #[error("operation is not defined on the root node")]
    RootPath,

    #[error("expected a tree whose root has exactly one child, found {0} children")]
    NotSingleChild(usize),

    #[error("node label is not the product of the given factors")]
    LabelMismatch,

    #[error("division by a non-constant or zero polynomial")]
    Division,

    #[error("connection file: {0}")]
    ConnectionFile(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
