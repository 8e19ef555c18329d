//! Exact rationals, the quadratic field Q(√Δ), and decimal rendering.

mod decimal;
mod qf;
mod rat;

pub use decimal::{qf_to_decimal, Decimal, GUARD_DIGITS};
pub use qf::{qf_arith, Sign, QF};
pub use rat::{rat_arith, ArithOp, Rat};

/// Operands are kept as text; they only serve the message.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero: {lhs} / {rhs}")]
    DivisionByZero { lhs: String, rhs: String },
    #[error("division by zero in Q(sqrt): ({lhs}) / ({rhs})")]
    QfDivisionByZero { lhs: String, rhs: String },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("mismatched discriminants {lhs} and {rhs}")]
    MismatchedDisc { lhs: String, rhs: String },
    #[error("discriminant must be nonzero")]
    ZeroDiscriminant,
    #[error("negative discriminant {0} has no real embedding")]
    NonRealDisc(String),
    #[error("precision must be at least 1")]
    BadPrecision,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}
