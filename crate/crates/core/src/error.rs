use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {n} out of range (sequence has {len} terms)")]
    IndexOutOfRange { n: u64, len: u64 },

    #[error("digit budget exceeded: needs about {needed} decimal digits, budget is {budget}")]
    Overflow { needed: u64, budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid index map: {0}")]
    InvalidIndexMap(String),

    #[error("no structural tail guarantee for this sequence")]
    NoTailGuarantee,

    #[error("no index in {from}..={to} satisfies the threshold")]
    NotFoundInWindow { from: u64, to: u64 },

    #[error("exponent {0} is not > 2; Roth's criterion does not apply")]
    AlphaTooSmall(String),

    #[error("growth hypothesis fails at n={n}")]
    HypothesisFailed { n: u64 },

    #[error("witness inequality fails at m={m}")]
    WitnessFailed { m: u64 },

    #[error("no n <= {n_max} clears the threshold")]
    NotFoundBelowNMax { n_max: u64 },

    #[error("inconclusive after {refinements} refinements")]
    Inconclusive { refinements: u32 },

    #[error("enumeration of {count} polynomials exceeds cap {cap}")]
    EnumerationTooLarge { count: String, cap: u64 },

    #[error("enclosure was built from a different sequence")]
    SpecMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error objects and FFI status mapping.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::Overflow { .. } => "overflow",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InvalidIndexMap(_) => "invalid-index-map",
            Error::NoTailGuarantee => "no-tail-guarantee",
            Error::NotFoundInWindow { .. } => "not-found-in-window",
            Error::AlphaTooSmall(_) => "alpha-too-small",
            Error::HypothesisFailed { .. } => "hypothesis-failed",
            Error::WitnessFailed { .. } => "witness-failed",
            Error::NotFoundBelowNMax { .. } => "not-found-below-n-max",
            Error::Inconclusive { .. } => "inconclusive",
            Error::EnumerationTooLarge { .. } => "enumeration-too-large",
            Error::SpecMismatch => "spec-mismatch",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
