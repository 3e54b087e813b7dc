use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A generated sequence term failed to be an integer. This contradicts a
    /// theorem and always indicates a bug.
    #[error("term g_{index} = {value} of g^({q}/{p}) is not an integer")]
    NonIntegerTerm {
        p: i64,
        q: i64,
        index: usize,
        value: String,
    },

    /// An identity that holds by theorem failed during construction.
    #[error("identity {identity} violated at {indices:?}")]
    IdentityViolated { identity: String, indices: Vec<i64> },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("valuation of zero is undefined")]
    ZeroValuation,

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("malformed b-file line {line}: {content:?}")]
    MalformedLine { line: usize, content: String },

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("benchmark correctness gate failed at n={n}, entry ({row}, {col}): {factorized} != {elimination}")]
    BenchMismatch {
        n: usize,
        row: usize,
        col: usize,
        factorized: String,
        elimination: String,
    },
}
