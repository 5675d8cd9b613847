use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The configured grid cannot resolve the requested geometry.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// A ratio or comparison degenerated (for example 0/0 with one side nonzero).
    #[error("degenerate comparison: {0}")]
    Degenerate(String),

    /// An iterative solver failed to reach its residual target.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The exact value of the quantity is infinite at the requested point.
    #[error("infinite value: {0}")]
    InfiniteValue(String),

    /// A documented precondition of the operation was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The radial weight is non-integrable for the given exponent.
    #[error("singular weight: {0}")]
    SingularWeight(String),

    /// A constructive certificate (positivity sweep) failed.
    #[error("certification failed: {0}")]
    Certification(String),

    /// Malformed or inconsistent input specification.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}
