use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// The CLI maps these onto exit codes with [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field tower exhausted: no level above GF(2^{0}) is available")]
    TowerExhausted(u32),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("series is not in standard form: {0}")]
    NotStandardForm(String),

    #[error("zero input: {0}")]
    ZeroInput(String),

    #[error("tower is not a D4-extension (group {0})")]
    NotD4(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid break sequence: {0}")]
    InvalidBreaks(String),

    #[error("invalid degree profile: {0}")]
    InvalidProfile(String),

    #[error("non-integral Herbrand transform: {0}")]
    NonIntegralResult(String),

    #[error("tower step is not totally ramified: {0}")]
    NotTotallyRamified(String),

    #[error("automorphism group mismatch: {0}")]
    GroupTableMismatch(String),

    #[error("wrong ramification type: deformation {which} needs {expected}, got {found}")]
    WrongType {
        which: u8,
        expected: String,
        found: String,
    },

    #[error("first upper break is 1; the third deformation needs u1 > 1")]
    BreakTooSmall,

    #[error("constant has no Artin-Schreier root over the fiber coefficient field: {0}")]
    NotSplitAtFiber(String),

    #[error("verification failed in clause `{clause}`: {detail}")]
    VerificationMismatch { clause: String, detail: String },

    #[error("invalid triple: {0}")]
    InvalidTriple(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::PrecisionExhausted(_) => 3,
            _ => 1,
        }
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::PrecisionExhausted(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
