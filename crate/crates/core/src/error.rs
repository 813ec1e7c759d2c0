use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid G-set: {0}")]
    InvalidGSet(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("elements {0} and {1} are not comparable")]
    Incomparable(usize, usize),

    #[error("invalid Dowling element: {0}")]
    InvalidElement(String),

    #[error("enumeration cap of {cap} elements exceeded ({found} found so far)")]
    CapExceeded { cap: usize, found: usize },

    #[error("series error: {0}")]
    Series(String),

    #[error("non-integral dimension {value} at {location}")]
    NonIntegral { value: String, location: String },

    #[error("refused: {0}")]
    Refused(String),

    #[error("stability procedure: {0}")]
    Stability(String),

    #[error("representation error: {0}")]
    Representation(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag, used in CLI error JSON and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGroup(_) => "invalid_group",
            Error::InvalidGSet(_) => "invalid_gset",
            Error::NotSubgroup(_) => "not_subgroup",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::InvalidPoset(_) => "invalid_poset",
            Error::Incomparable(..) => "incomparable",
            Error::InvalidElement(_) => "invalid_element",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::Series(_) => "series",
            Error::NonIntegral { .. } => "non_integral",
            Error::Refused(_) => "refused",
            Error::Stability(_) => "stability",
            Error::Representation(_) => "representation",
            Error::Overflow(_) => "overflow",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
