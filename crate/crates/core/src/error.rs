use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A mode or domain specification violates one of its invariants.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// A field point is too close to the quadrature surface for the
    /// trapezoidal rule to resolve the kernel.
    #[error(
        "target ({x:.6}, {y:.6}, {z:.6}) is {distance:.3e} from the source torus; \
         at least {required:.3e} (3 node spacings) is required"
    )]
    TooCloseToSurface {
        x: f64,
        y: f64,
        z: f64,
        distance: f64,
        required: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}
