use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{op}: shape mismatch {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("vector length {found} does not match module dimension {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{kind}({n}) is not a valid classical algebra")]
    InvalidSize { kind: &'static str, n: usize },

    #[error("basis matrices are linearly dependent")]
    LinearlyDependent,

    #[error("representations act on different algebras")]
    AlgebraMismatch,

    #[error("operator of the given element is not nilpotent")]
    NotNilpotent,

    #[error("line stabilizer requested at the zero vector")]
    ZeroPoint,

    #[error("summand index {index} out of range ({count} summands)")]
    SummandOutOfRange { index: usize, count: usize },

    #[error("factor index {index} out of range ({count} factors)")]
    FactorOutOfRange { index: usize, count: usize },

    #[error("remaining coordinates are not invariant under the stabilizer")]
    NotInvariant,

    #[error("operator is not block diagonal with respect to the summands")]
    NotBlockDiagonal,

    #[error("chain module mismatch: {0}")]
    ChainMismatch(String),

    #[error("castling transform undefined: module dimension {m} does not exceed gl size {n}")]
    CastlingUndefined { m: usize, n: usize },

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("stabilizer chain level {level}: {message}")]
    ChainLevel { level: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
