use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// First failing axiom found while validating a raw Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableDiagnostic {
    Empty,
    TooLarge { order: usize, max: usize },
    NotSquare { row: usize, len: usize, order: usize },
    OutOfRange { row: usize, col: usize, value: i64 },
    IdentityNotZero { witness: usize },
    RowNotLatin { row: usize, repeated: usize },
    ColumnNotLatin { col: usize, repeated: usize },
    NotAssociative { x: usize, y: usize, z: usize },
}

impl fmt::Display for TableDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => write!(f, "empty table"),
            Self::TooLarge { order, max } => write!(f, "order {order} exceeds the maximum {max}"),
            Self::NotSquare { row, len, order } => {
                write!(f, "row {row} has {len} entries, expected {order}")
            }
            Self::OutOfRange { row, col, value } => {
                write!(f, "entry ({row}, {col}) = {value} is out of range")
            }
            Self::IdentityNotZero { witness } => {
                write!(f, "element 0 is not a two-sided identity (fails at {witness})")
            }
            Self::RowNotLatin { row, repeated } => {
                write!(f, "non-Latin: row {row} repeats element {repeated}")
            }
            Self::ColumnNotLatin { col, repeated } => {
                write!(f, "non-Latin: column {col} repeats element {repeated}")
            }
            Self::NotAssociative { x, y, z } => {
                write!(f, "associativity fails for ({x}*{y})*{z} != {x}*({y}*{z})")
            }
        }
    }
}

impl std::error::Error for TableDiagnostic {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    GroupSpec(String),

    #[error("invalid Cayley table: {0}")]
    Table(#[from] TableDiagnostic),

    #[error("scenario mismatch: {0}")]
    Scenario(String),

    #[error("group element {element} out of range (order {order})")]
    ElementOutOfRange { element: usize, order: usize },

    #[error("point {point} out of range (v = {v})")]
    PointOutOfRange { point: usize, v: usize },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("base blocks #{first} and #{second} generate the same block orbit")]
    OrbitCollision { first: usize, second: usize },

    #[error("S(2,{k},{v}) is not admissible: {reason}")]
    Inadmissible { v: usize, k: usize, reason: String },

    #[error("inconsistent forced blocks: {0}")]
    InconsistentForced(String),

    #[error("brute-force oracle cap exceeded: {candidates} candidate blocks (cap {cap})")]
    OracleCap { candidates: u128, cap: u128 },

    #[error("design is not a verified Steiner system")]
    Unverified,

    #[error("too many pair classes: {0} (maximum {max})", max = crate::search::MAX_CLASSES)]
    TooManyClasses(usize),

    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),

    #[error("catalog entry `{0}` needs an imported Cayley table")]
    ImportRequired(String),

    #[error("no numbering candidates supplied")]
    NoCandidates,

    #[error("invalid search configuration: {0}")]
    Config(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse { offset, message: message.into() }
    }
}
