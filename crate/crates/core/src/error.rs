//! Error type shared by every module in this crate.

use alloc::string::String;

/// Everything that can go wrong in geometry, field, or flow computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A point was handed to a space it does not belong to.
    #[error("point does not belong to this space")]
    SpaceMismatch,
    /// Two tangent vectors are anchored at different base points.
    #[error("tangent vectors are based at different points")]
    BaseMismatch,
    /// A direction was requested between coincident points.
    #[error("direction undefined: the two points coincide")]
    ZeroDirection,
    /// The geodesic cannot be extended past the requested point.
    #[error("geodesic extension does not exist here")]
    NoExtension,
    /// An argument fell outside the documented domain of an operation.
    #[error("argument out of domain: {0}")]
    DomainError(&'static str),
    /// The convex set kind is not supported in this space.
    #[error("convex set kind is not supported in this space")]
    UnsupportedSet,
    /// A space description failed validation.
    #[error("invalid space description: {0}")]
    InvalidSpace(String),
    /// A tree description file failed validation at a specific line.
    #[error("invalid tree description at line {line}: {msg}")]
    InvalidSpec { line: usize, msg: String },
    /// An iterative proximal solve failed to meet its tolerance.
    #[error("proximal iteration did not converge within {iterations} steps")]
    ProxDiverged { iterations: usize },
    /// A map failed the sampled nonexpansiveness check.
    #[error("map expanded a sampled pair by factor {factor}")]
    NotNonexpansive { factor: f64 },
    /// The field carries no zero-set witness.
    #[error("field has no zero-set witness")]
    NoZeroSet,
    /// No finite bound on the field norm is available at this point.
    #[error("no finite field-norm bound available at this point")]
    NoNormBound,
    /// A step schedule violated its constraints.
    #[error("invalid step schedule: {0}")]
    ScheduleError(&'static str),
    /// The trajectory tail is too short to define an asymptotic center.
    #[error("trajectory tail is too short")]
    EmptyTail,
    /// The field does not provide the requested oracle.
    #[error("field does not provide this oracle: {0}")]
    MissingOracle(&'static str),
    /// The operation has no implementation for this combination of inputs.
    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
