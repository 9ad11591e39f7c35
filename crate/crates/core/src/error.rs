use thiserror::Error;

/// Errors raised by parsing and by operations whose outcome depends on a
/// digit or refinement budget.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed literal `{literal}`: {reason}")]
    MalformedLiteral { literal: String, reason: &'static str },

    #[error("order could not be decided within {budget} fractional digits")]
    OrderUndecided { budget: usize },

    #[error("left operand is not strictly less than the right operand")]
    NotLess,

    #[error("sign could not be decided within {budget} fractional digits")]
    SignUndecided { budget: usize },

    #[error("digit {index} is not pinned after {budget} extra digits of refinement")]
    DigitsUnstable { index: usize, budget: usize },

    #[error("square root of a negative number")]
    NegativeRadicand,

    #[error("division by zero")]
    DivisionByZero,

    #[error("digit stream has a run of 9s at position {index} longer than the {window}-digit window")]
    CanonicalViolation { index: usize, window: usize },

    #[error("a run of 9s starting at digit {index} exceeds the detection window and no tail hint resolved it")]
    NineTailUndetectable { index: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
