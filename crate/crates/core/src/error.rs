use thiserror::Error;

/// Errors raised by field construction, tuple verification and the constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violates an operation's precondition (non-prime characteristic,
    /// degree zero, `q <= 7` where the bound needs `q > 7`, malformed field spec...).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A value outside the domain of a partial operation, such as inverting zero.
    #[error("domain error: {0}")]
    Domain(String),

    /// An element code that does not lie in `[0, q)`.
    #[error("element code {code} out of range for a field of order {q}")]
    ElementRange { code: u64, q: u64 },

    /// Integer coefficient arithmetic left the 64-bit range.
    #[error("integer coefficient overflow while {0}")]
    Overflow(String),

    /// The input exceeds a configured size policy.
    #[error("size policy exceeded: {0}")]
    SizePolicy(String),

    /// The input violates a hypothesis of the bound being checked (for example a
    /// perfect-square polynomial handed to the Weil check).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// A construction produced coinciding elements because the chosen `y` has too
    /// small a multiplicative order.
    #[error("construction produced repeated elements: {0}")]
    Distinctness(String),

    /// A set that was required to be a Diophantine tuple is not one.
    #[error("elements {a} and {b} (positions {i}, {j}) have a*b + 1 a non-square")]
    NotDiophantine { i: usize, j: usize, a: u64, b: u64 },

    /// An exhaustive search for a construction parameter came up empty.
    #[error("no qualifying element: {0}")]
    NoWitness(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
