use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("leaves [{0}, {1}] do not form a sibling pair")]
    NotASiblingPair(usize, usize),

    #[error("rotation not applicable: {0}")]
    NotApplicable(String),

    #[error("letter {0} (counted from the right) is not applicable without adding carets")]
    NotApplicableAtStep(usize),

    #[error("transition not covered by the G(c) rules: {0}")]
    UnspecifiedCase(String),

    #[error("trees have different caret counts ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("tree must have at least one caret")]
    EmptyTree,

    #[error("generating set has left-arm levels; only right-arm sets are supported here")]
    NotRightArmSet,

    #[error("{what} with n = {n} exceeds the resource cap {cap}")]
    ResourceCap { what: &'static str, n: usize, cap: usize },

    #[error("distance is not defined for this pair and generating set")]
    NotDefined,

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("parameter violation: {0}")]
    ParameterViolation(String),

    #[error("invalid generating set: {0}")]
    InvalidGenSet(String),

    #[error("distance cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
