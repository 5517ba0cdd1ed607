use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated (range, coprimality, size).
    #[error("domain error: {0}")]
    Domain(String),
    /// Division by the zero rational function or zero polynomial.
    #[error("division by zero")]
    DivisionByZero,
    /// Mixed residue rings: operands live modulo x^q - 1 for different q.
    #[error("cyclotomic modulus mismatch: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    /// An exact verification that the caller asked to be enforced did not hold.
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    /// Numeric root isolation could not certify the spectrum to tolerance.
    #[error("root isolation failed: {0}")]
    RootIsolation(String),
    /// Requested working precision is not supported.
    #[error("unsupported precision: {0} bits (supported: <= 106)")]
    UnsupportedPrecision(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
