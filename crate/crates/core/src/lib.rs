//! Exact evaluation of reciprocal sums over Horadam sequences.
//!
//! Every family of finite sums is evaluated through its telescoped closed form
//! and checked against direct term-by-term summation; infinite families are
//! evaluated exactly in Q(√Δ) and bracketed by certified partial sums.

pub mod exact;
pub mod families;
pub mod horadam;
pub mod oracle;
pub mod verify;

pub use exact::{ArithError, ArithOp, Decimal, Rat, Sign, QF};
pub use families::{
    eval_finite_closed, eval_finite_equivalent, eval_infinite_closed, validate, FamilyId,
    SpecRecord, SumSpec, SumValue, ValidSpec, ValidateError,
};
pub use horadam::{HoradamParams, ParamError, SeqKind};
pub use oracle::{direct_finite, direct_infinite, Bracket, OracleError};
pub use verify::{run_fixtures, run_grid, GridConfig, VerifyReport};
