use thiserror::Error;

use crate::search::Checkpoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("element has {found} components but the group has {expected} cyclic factors")]
    ArityMismatch { expected: usize, found: usize },

    #[error("residue {value} is out of range for a cyclic factor of order {order}")]
    ResidueOutOfRange { value: u64, order: u64 },

    #[error("group of order {cardinality} exceeds the enumeration cap of {cap} elements")]
    CapExceeded { cardinality: u64, cap: u64 },

    #[error("operands live over different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },

    #[error("sequence is not a divisor of the dividend")]
    NotADivisor,

    #[error("invalid length set: {0}")]
    InvalidLengthSet(String),

    #[error("brute-force oracle is limited to {max} elements, got {len}")]
    GuardExceeded { len: usize, max: usize },

    #[error("unsupported group shape: {0}")]
    UnsupportedShape(String),

    #[error("translation symmetry requires every permitted length to be a multiple of exp(G)")]
    IllegalTranslation,

    #[error(
        "node budget of {budget} exhausted after {nodes} nodes; best lower bound {lower_bound}"
    )]
    BudgetExhausted {
        budget: u64,
        nodes: u64,
        lower_bound: usize,
        checkpoint: Box<Checkpoint>,
    },

    #[error("avoiding sequences reach the length cap {cap}; the constant is unbounded or exceeds the cap")]
    Unbounded { cap: usize },

    #[error("invalid parameters for {label}: {reason}")]
    InvalidParams { label: String, reason: String },

    #[error("basis does not match the required order profile: {0}")]
    BasisMismatch(String),

    #[error("expected a sequence of length {expected}, got {found}")]
    WrongLength { expected: String, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty stream")]
    EmptyStream,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
