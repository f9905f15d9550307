//! Library-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse `{0}` as a rational p/q")]
    BadRational(String),

    #[error("variable `{0}` missing from evaluation assignment")]
    MissingVariable(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("form has degree {got}, expected {expected}")]
    WrongDegree { expected: usize, got: usize },

    #[error("dimension {0} is not odd")]
    NotOddDimension(usize),

    #[error("dimension {0} is not even")]
    NotEvenDimension(usize),

    #[error("algebra is not filiform")]
    NotFiliform,

    #[error("ad x is not nilpotent")]
    NotNilpotent,

    #[error("center is not spanned by the trailing basis vector X_{0}")]
    CenterNotTrailing(usize),

    #[error("2-form is not closed")]
    FormNotClosed,

    #[error("2-form is degenerate")]
    DegenerateForm,

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("unknown parameter `{param}` for family `{family}`")]
    UnknownParameter { family: String, param: String },

    #[error("family `{family}` constraint violated: {poly} = {value} at the given point")]
    ConstraintViolated {
        family: String,
        poly: String,
        value: String,
    },

    #[error("family `{0}` requires an explicit dimension")]
    DimensionRequired(String),

    #[error("family `{family}` does not support dimension {dim}")]
    BadDimension { family: String, dim: usize },

    #[error("coboundary escapes the cochain pattern at pair (X_{i}, X_{j}), component X_{k}: {value}")]
    PatternEscape {
        i: usize,
        j: usize,
        k: usize,
        value: String,
    },

    #[error("family `{0}` has no linear cochain pattern")]
    NoCochainPattern(String),

    #[error("left-symmetry check failed on {0} triple(s)")]
    NotLeftSymmetric(usize),

    #[error("product does not reproduce the bracket on {0} pair(s)")]
    BracketMismatch(usize),

    #[error("witness form is not symplectic")]
    NotSymplectic,

    #[error("quotient of the extension does not recover the base algebra")]
    QuotientMismatch,

    #[error("invalid reduced-count arguments: m={m}, r={r} do not match a printed case")]
    BadReducedCountArgs { m: usize, r: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
