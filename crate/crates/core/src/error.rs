use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown id `{id}` at line {line}")]
    UnknownId { line: usize, id: String },
    #[error("rotation length ≠ 3 at line {line} (vertex `{vertex}` has {len} tokens)")]
    RotationLength { line: usize, vertex: String, len: usize },
    #[error("structural error: {0}")]
    Structural(String),
    #[error("invalid graph: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("not a flip disk: {0}")]
    NotFlipDisk(String),
    #[error("coordinate {0} is not a 0-resolved coordinate")]
    NotZeroCoordinate(usize),
    #[error("state has {got} bits, graph has {want} matching edges")]
    StateLength { got: usize, want: usize },
    #[error("Z-lift unavailable outside G (bad face {0})")]
    ZLiftUnavailable(String),
    #[error("not a decorated face")]
    NotDecoratedFace,
    #[error("PD code: {0}")]
    Pd(String),
    #[error("non-planar flattening")]
    NonPlanarFlattening,
    #[error("{0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
}
