use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group parameter: {0}")]
    InvalidGroup(String),
    #[error("character inner product {value} is {residue:e} away from an integer")]
    NonIntegralMultiplicity { value: f64, residue: f64 },
    #[error("framing rank must be at least 1")]
    InvalidFramingRank,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a preprojective module: relation residual is nonzero at vertex {0}")]
    NonzeroResidual(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("ideal does not have finite colength within degree {0}")]
    InfiniteColength(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
