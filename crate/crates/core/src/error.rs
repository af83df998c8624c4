use core::fmt;

/// Errors raised by the rod model and solver.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A physical parameter violated its admissible range.
    InvalidParameter { name: &'static str, value: f64 },
    /// An argument fell outside its domain `[min, max]`.
    Domain {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    /// Spine length beyond the characterized envelope.
    OutOfEnvelope { length: f64, max: f64 },
    /// A stiffness matrix has a zero (or non-finite) diagonal entry.
    SingularStiffness,
    /// Zero tip deflection implies an infinite modulus.
    RigidBody,
    /// Chamber pressure outside `[0, MAX_PRESSURE]` or non-finite.
    InvalidCommand { chamber: usize, pressure: f64 },
    /// The spatial march produced a non-finite state at grid index `index`.
    Divergence { index: usize },
    /// The Newton iteration could not produce a step.
    SolverFailure {
        iterations: usize,
        residual_norm: f64,
        reason: &'static str,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter `{name}` = {value}")
            }
            Error::Domain { name, value, min, max } => {
                write!(f, "`{name}` = {value} outside [{min}, {max}]")
            }
            Error::OutOfEnvelope { length, max } => {
                write!(f, "spine length {length} m exceeds the characterized envelope of {max} m")
            }
            Error::SingularStiffness => write!(f, "singular stiffness matrix"),
            Error::RigidBody => write!(f, "zero deflection: modulus is unbounded"),
            Error::InvalidCommand { chamber, pressure } => {
                write!(f, "chamber {chamber}: pressure {pressure} Pa not admissible")
            }
            Error::Divergence { index } => {
                write!(f, "integration diverged at grid index {index}")
            }
            Error::SolverFailure { iterations, residual_norm, reason } => write!(
                f,
                "shooting solver failed after {iterations} iterations (residual {residual_norm:e}): {reason}"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}
