use thiserror::Error;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        match e.kind() {
            std::io::ErrorKind::BrokenPipe => Error::OutputClosed,
            _ => Error::Io(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a monic polynomial needs degree >= 1 (got no coefficients)")]
    EmptyPolynomial,

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("pairwise deflated product needs two distinct indices (got {0} twice)")]
    RepeatedIndex(usize),

    /// Two entries of a root vector are closer than the collision tolerance;
    /// the Jacobian of the Vieta map is singular (or nearly so) there.
    #[error("entries {i} and {j} collide (separation {separation:e})")]
    Collision { i: usize, j: usize, separation: f64 },

    #[error("dense linear system is singular")]
    Singular,

    #[error("convergence order undefined: {0}")]
    UndefinedOrder(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),

    /// The reader of our output went away, as in `simroots ... | head`.
    #[error("output closed")]
    OutputClosed,

    #[error("parse error: {0}")]
    Parse(String),
}
