use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("map is not a homomorphism")]
    NotAHomomorphism,

    /// A configured size or count cap was exceeded; `reached` is how far the
    /// computation got (or the offending size).
    #[error("{what} limit exceeded: limit {limit}, reached {reached}")]
    LimitExceeded {
        what: &'static str,
        limit: usize,
        reached: usize,
    },

    #[error("elements are not comparable: {0}")]
    NotComparable(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),

    #[error("symbol clash: {0}")]
    SymbolClash(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn limit(what: &'static str, limit: usize, reached: usize) -> Self {
        Error::LimitExceeded {
            what,
            limit,
            reached,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self, Error::LimitExceeded { .. })
    }
}
