use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse continued fraction: {0}")]
    ParseCf(String),

    #[error("cannot parse word: {0}")]
    ParseWord(String),

    #[error("cannot parse morphism: {0}")]
    ParseMorphism(String),

    /// A query needed more partial quotients than the expansion provides.
    /// A head-only expansion is a truncation of an irrational slope; we
    /// never extrapolate past what is known.
    #[error("insufficient continued-fraction coefficients: need {needed}, have {available}")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("slope must be normalized (first partial quotient 1, i.e. slope > 1/2)")]
    SlopeNotNormalized,

    /// Interval brackets became too wide to classify the orbit point at
    /// the given step. The caller should tighten the alpha/x0 brackets.
    #[error("precision exhausted at step {step}: orbit bracket straddles an interval boundary")]
    PrecisionExhausted { step: usize },

    #[error("substitution is not prolongable on the seed letter")]
    NotProlongable,

    /// The operation needs a slope (closed forms) but the view carries none.
    #[error("operation requires a Sturmian slope; this view is a control word without one")]
    NotSturmianSpec,

    /// Answering would require factor knowledge beyond what the prefix
    /// provably contains. Never answered partially.
    #[error("query at depth {requested} exceeds certified depth {certified}")]
    BeyondCertifiedDepth { requested: usize, certified: usize },

    #[error("factor {0} does not occur in the language")]
    FactorNotInLanguage(String),

    #[error("factor has {found} return words, expected exactly 2")]
    NotTwoReturnWords { found: usize },

    #[error("power lifting requires exponent r >= 2")]
    ExponentTooSmall,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A verified mathematical identity failed. This indicates an
    /// implementation bug, never a property of the input.
    #[error("theorem verification failed: {0}")]
    TheoremViolation(String),

    #[error("value too large for this platform: {0}")]
    NumericOverflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
