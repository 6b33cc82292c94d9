use thiserror::Error;

/// Errors raised by the operators, bounds and harnesses in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sequence value list is empty")]
    EmptyValues,

    #[error("sequence contains a non-finite value at index {index}")]
    NonFiniteValue { index: i64 },

    #[error("exponent p must lie in (0, inf], got {0}")]
    InvalidExponent(f64),

    #[error("gamma must lie in {range}, got {gamma}")]
    InvalidGamma { gamma: f64, range: &'static str },

    #[error("invalid operator parameters: {0}")]
    InvalidParams(String),

    #[error("kernel is singular at x = {x}, y = {y} (x = ±y)")]
    Singular { x: f64, y: f64 },

    #[error("moment of order {order} does not vanish (residual {residual:e})")]
    MomentCondition { order: u32, residual: f64 },

    #[error("support of the sequence is not contained in [{lo}, {hi}]")]
    SupportOutsideWindow { lo: i64, hi: i64 },

    #[error("cutoff J = {got} is too small, need J >= {need}")]
    CutoffTooSmall { got: u64, need: u64 },

    #[error("tail is not summable by the remainder estimate (decay exponent {exponent} <= 1)")]
    NotSummable { exponent: f64 },

    #[error("window plan too small: padded length {padded} < required {required}")]
    PlanTooSmall { padded: usize, required: usize },

    #[error("window plan does not cover the support [{lo}, {hi}] of the input")]
    PlanDoesNotCover { lo: i64, hi: i64 },

    #[error("moment constraint system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("invalid atom specification: {0}")]
    InvalidAtomSpec(String),

    #[error("random atom draw degenerate after {attempts} attempts")]
    DegenerateDraw { attempts: u32 },

    #[error("sign check failed: {0}")]
    SignCheck(String),

    #[error("sign undetermined: enclosure [{lo:e}, {hi:e}] straddles zero")]
    Inconclusive { lo: f64, hi: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
