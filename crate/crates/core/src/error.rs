use thiserror::Error;

/// Errors raised by symbol parsing, quadrature setup, and the pairing routes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ParseError at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("NotHomogeneous: terms of total degree {degrees:?}")]
    NotHomogeneous { degrees: Vec<u32> },

    #[error("NotElliptic: estimated minimum over the sphere is {margin:e}")]
    NotElliptic { margin: f64 },

    #[error("OddDegree: polynomial symbol of odd degree {0}")]
    OddDegree(u32),

    #[error("InvalidSymbol: {0}")]
    InvalidSymbol(String),

    #[error("NotUnit: |theta| = {0}")]
    NotUnit(f64),

    #[error("UnsupportedSymbolForm: {0}")]
    UnsupportedSymbolForm(String),

    #[error("DepthExceeded: derivative order {requested} exceeds {max}")]
    DepthExceeded { requested: usize, max: usize },

    #[error("UnsupportedDimension: {0}")]
    UnsupportedDimension(usize),

    #[error("BadTolerance: {0:e}")]
    BadTolerance(f64),

    #[error("NonIntegerDegree: {0}")]
    NonIntegerDegree(f64),

    #[error("WrongBranch: degree {degree} with dimension {dimension}")]
    WrongBranch { degree: f64, dimension: usize },

    #[error("OnPole: z = {re}{im:+}i")]
    OnPole { re: f64, im: f64 },

    #[error("StripViolation: Re z = {re} must exceed {bound}")]
    StripViolation { re: f64, bound: f64 },

    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
