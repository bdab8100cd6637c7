use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Target BER at or above 0.5 can never be violated by the model.
    #[error("unbounded capacity: target BER {target} is not below 0.5")]
    UnboundedCapacity { target: f64 },

    /// The capacity scan hit its user cap before the target was exceeded.
    #[error("capacity scan reached the cap of {k_cap} users without exceeding the target")]
    CapReached { k_cap: u32 },

    /// Even a single user violates the target (possible with co-channel load).
    #[error("target BER {target} is unreachable: a single user already sees BER {ber_at_one}")]
    TargetUnreachable { target: f64, ber_at_one: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// More null constraints than the array has degrees of freedom.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("degenerate pattern: gain is zero at every angle")]
    DegeneratePattern,

    #[error("unknown user id {0}")]
    UnknownUser(u32),

    #[error("user id mismatch: {0}")]
    IdMismatch(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
