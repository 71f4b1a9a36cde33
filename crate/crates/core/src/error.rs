use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {0} lies within tolerance of a root of (x^4-1)(x^2-2x-1)")]
    ExcludedPoint(String),
    #[error(
        "derivative of the denominator vanishes at 1/r (|Q'(1/r)| = {0:e}); tolerance too coarse"
    )]
    DegenerateRoot(f64),
    #[error("PIP axiom violated: {0}")]
    AxiomViolation(String),
    #[error("instance too small: {0}")]
    TooSmall(String),
    #[error("separator removal does not split the kernel into the classified sides: {0}")]
    SeparationFailure(String),
    #[error("vertex {0} has no available moves")]
    IsolatedVertex(usize),
    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    ConvergenceFailure { iterations: usize, residual: f64 },
    #[error("set has stationary mass {0} > 1/2; pass its complement")]
    HeavySide(String),
    #[error("{what} = {size} exceeds the cap of {cap}")]
    TooLarge {
        what: String,
        size: usize,
        cap: usize,
    },
    #[error("outside the domain: {0}")]
    DomainError(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
