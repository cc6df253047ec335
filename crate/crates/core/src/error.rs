use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid topology at point {point}: {reason}")]
    InvalidTopology { point: usize, reason: String },

    #[error("size mismatch: expected {expected} points, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("point {point} out of range for a space of {n} points")]
    PointOutOfRange { point: usize, n: usize },

    #[error("instance too large: {what} ({count} exceeds cap {cap})")]
    InstanceTooLarge {
        what: String,
        count: u128,
        cap: u128,
    },

    #[error("space is not normally preordered")]
    NotNormal,

    #[error("space is not convex (fails at point {point})")]
    NotConvex { point: usize },

    #[error("space is not completely regularly preordered")]
    NotCompletelyRegular,

    #[error("topology is not discrete")]
    NotDiscrete,

    #[error("not a quasi-pseudo-metric: {0}")]
    NotAQpm(String),

    #[error("relation is not contained in the preorder: ({0}, {1}) missing")]
    NotASubrelation(usize, usize),

    #[error("bad arguments: {0}")]
    BadArguments(String),

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("window {0:?} out of range")]
    WindowOutOfRange([usize; 4]),

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
