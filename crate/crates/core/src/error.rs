use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarMismatch { left: usize, right: usize },

    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    VarIndex { index: usize, nvars: usize },

    #[error("unsupported variable count {0} (at most 6)")]
    TooManyVars(usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("edge subset is empty")]
    EmptyEdgeSubset,

    #[error("bad edge subset `{0}`")]
    BadEdgeSpec(String),

    #[error("entry {index} is not positive")]
    NonPositive { index: usize },

    #[error("list is not tetrahedral")]
    NotTetrahedral,

    #[error("simplex `{0}` is degenerate")]
    DegenerateSimplex(String),

    #[error("unknown simplex or chamber `{0}`")]
    UnknownId(String),

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("exponent {exponent} of variable {var} exceeds the cap {cap}")]
    DegreeCap { var: usize, exponent: u32, cap: u32 },

    #[error("point lies outside the pseudo-tetrahedron cone")]
    OutsideCone,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
