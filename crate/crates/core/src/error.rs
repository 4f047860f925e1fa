use alloc::string::String;

/// Failures reported by the certified kernels.
///
/// Every variant describes a violated precondition or a refusal to certify;
/// none of them stands for an internal bug.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("enclosure lower end exceeds its upper end")]
    InvertedEnclosure,

    #[error("cannot parse {input:?} as a rational number (at byte {position})")]
    Parse { input: String, position: usize },

    #[error("{function} is undefined at {at}")]
    Domain { function: &'static str, at: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("missing metadata: {0}")]
    MissingMetadata(String),

    #[error("value at {at} is not an exact rational")]
    NotExact { at: String },

    #[error("index {index} precedes the stream start {start}")]
    IndexBeforeStart { index: u64, start: u64 },

    #[error("claim violated at index {index}: {what}")]
    ClaimViolated { index: u64, what: String },

    #[error("zero term at index {0}")]
    ZeroTerm(u64),

    #[error("all scanned coefficients are zero")]
    AllZeroTail,

    #[error("terms at indices {0} and {1} cannot be ordered at the available precision")]
    Incomparable(u64, u64),

    #[error("empty test policy")]
    EmptyPolicy,

    #[error("pick point {point} lies outside cell [{lo}, {hi}]")]
    PickOutsideCell { point: String, lo: String, hi: String },

    #[error("power series centers differ")]
    CenterMismatch,

    #[error("bracket [{lo}, {hi}] has no sign change")]
    NoSignChange { lo: String, hi: String },

    #[error("bracket [{lo}, {hi}] spans more than one monotone piece")]
    SpansPieces { lo: String, hi: String },

    #[error("{class} terms exhausted after {consumed} terms")]
    SignClassExhausted { class: &'static str, consumed: usize },

    #[error("nonpositive factor at index {0}")]
    NonpositiveFactor(u64),

    #[error("singular point {0} lies inside the closed evaluation range")]
    SingularInside(String),

    #[error("point {0} lies outside the operator domain")]
    OutsideDomain(String),
}

pub type Result<T> = core::result::Result<T, Error>;
