use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Variants are split into *validation* failures (bad input, violated
/// preconditions) and *computational* failures (quadrature did not settle,
/// enumeration budget exhausted). The CLI maps the two groups onto distinct
/// exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index ({0}, {1}) is outside the array shape")]
    IndexOutOfRange(usize, usize),
    #[error("malformed shape: {0}")]
    Shape(String),
    #[error("entry at ({0}, {1}) is not strictly positive and finite")]
    NonPositive(usize, usize),
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pole on or across the contour: {0}")]
    PoleCollision(String),
    #[error("dimension cap exceeded: {0}")]
    DimensionCap(String),
    #[error("argument out of supported range: {0}")]
    OutOfRange(String),
    #[error("enumeration capacity exceeded after {0} states")]
    Capacity(u64),
    #[error("finite-difference Jacobian is singular or non-finite (det = {0})")]
    SingularJacobian(f64),
    #[error("numerical evaluation did not converge: {0}")]
    Convergence(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Capacity(_) | Error::SingularJacobian(_) | Error::Convergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
