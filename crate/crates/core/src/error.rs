use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("elements belong to different groups (m = {left} vs m = {right})")]
    MismatchedM { left: u32, right: u32 },

    #[error("index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    /// A computation would exceed its configured budget. The message names
    /// the alternative path (streaming evaluation, giant test, ...).
    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("permutation degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("group is not transitive on the requested point set")]
    Intransitive,

    #[error("generator {index} does not fix point {point}")]
    GeneratorMovesPoint { index: usize, point: u32 },

    #[error("generator {index} is an odd permutation")]
    OddGenerator { index: usize },

    #[error("unknown lemma id {0:?}")]
    UnknownLemma(String),

    #[error("{0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
