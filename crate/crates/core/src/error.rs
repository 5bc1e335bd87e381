use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid order {got}: {family} requires n >= {min}")]
    InvalidOrder {
        family: &'static str,
        got: usize,
        min: usize,
    },

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid modulus {0}: not a prime")]
    InvalidModulus(u64),

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    /// Vertices of cell `from` disagree on their neighbour count in cell `to` (0-indexed cells).
    #[error("partition is not equitable: vertices of cell {from} see cell {to} with different counts")]
    NotEquitable { from: usize, to: usize },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("singular denominator: |sin(a*x/2)| = {0:e}")]
    SingularDenominator(f64),

    #[error("eigenvector basis is singular: |det| = {0:e}")]
    SingularBasis(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
