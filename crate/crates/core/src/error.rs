use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is singular")]
    Singular,

    #[error("form is not positive definite")]
    NotPositiveDefinite,

    #[error("marked vector must have norm 3, found {0}")]
    MarkedNorm(num_bigint::BigInt),

    #[error("linear functional is zero")]
    ZeroFunctional,

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("family `{0}` is not a built-in family")]
    NotBuiltin(String),

    #[error("tau = {tau} is outside the admissible range of `{family}`")]
    TauOutOfRange { family: String, tau: i64 },

    #[error("component tau = {tau} of `{family}` is empty")]
    EmptyComponent { family: String, tau: i64 },

    #[error("family `{family}` has no {expected} fiber class")]
    FiberNotApplicable { family: String, expected: &'static str },

    #[error("invalid overlattice parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid family definition: {0}")]
    InvalidFamily(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown output format `{0}`")]
    UnknownFormat(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}
