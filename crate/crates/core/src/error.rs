use thiserror::Error;

use crate::rational::Rational;

/// Everything that can go wrong while building, validating or analysing a system.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("system has no contexts")]
    EmptySystem,
    #[error("empty identifier")]
    EmptyId,
    #[error("content `{0}` is declared more than once")]
    DuplicateContent(String),
    #[error("context `{0}` is declared more than once")]
    DuplicateContext(String),
    #[error("content `{0}` must have at least two distinct outcomes")]
    OutcomeSetTooSmall(String),
    #[error("content `{content}` lists outcome `{outcome}` twice")]
    DuplicateOutcome { content: String, outcome: String },
    #[error("context `{context}` lists content `{content}` more than once")]
    DuplicateContentInContext { context: String, content: String },
    #[error("context `{context}` has no contents")]
    EmptyContext { context: String },
    #[error("context `{context}` refers to unknown content `{content}`")]
    UnknownContent { context: String, content: String },
    #[error("context `{0}` is not part of the system")]
    UnknownContext(String),
    #[error("context `{context}`: outcome tuple has {found} components, expected {expected}")]
    ArityMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("context `{context}`: outcome tuple {tuple:?} is listed twice")]
    DuplicateCell { context: String, tuple: Vec<String> },
    #[error("domain mismatch: content `{content}` in context `{context}` has no outcome `{outcome}`")]
    DomainMismatch {
        content: String,
        context: String,
        outcome: String,
    },
    #[error("marginals of `{left}` and `{right}` are defined over different outcome sets")]
    MarginalDomainMismatch { left: String, right: String },
    #[error("context `{context}`: probability {value} is outside [0, 1]")]
    ProbabilityOutOfRange { context: String, value: Rational },
    #[error("context `{context}`: probabilities sum to {sum}, expected 1")]
    ProbabilitySumMismatch { context: String, sum: Rational },
    #[error("content `{content}` does not appear in context `{context}`")]
    VariableNotInContext { content: String, context: String },
    #[error("content `{0}` is not encoded with the binary outcomes +1/-1")]
    NotPlusMinusOne(String),
    #[error("content `{0}` is not binary")]
    NotBinary(String),
    #[error("coupling needs {required} atoms, above the cap of {cap}")]
    AtomCapExceeded { required: u128, cap: u128 },
    #[error("system is not deterministic")]
    NotDeterministic,
    #[error("system is not a cyclic system of rank 2")]
    NotCyclicRank2,
    #[error("assignment space of {required} exceeds the cap of {cap}")]
    CapExceeded { required: u128, cap: u128 },
    #[error("no deterministic variant satisfies the constraints (context `{0}` admits nothing)")]
    EmptyVariantSet(String),
    #[error("invalid constraint in context `{context}`: {reason}")]
    InvalidConstraint { context: String, reason: String },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("cannot parse `{0}` as an exact rational")]
    BadRational(String),
    #[error("vertex enumeration needs {required} basis candidates, above the limit of {limit}")]
    EnumerationTooLarge { required: u128, limit: u128 },
    #[error("{path}:{line}:{column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<Error>,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
