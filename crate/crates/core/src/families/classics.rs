//! Two classical Fibonacci results: Good's finite sum of `1/F_{2^i}` and
//! Miller's value of the infinite one.

use crate::exact::{Rat, QF};
use crate::horadam::lucas_u;

/// Largest `N` accepted by [`classic_good`]. `F_{2^24}` already has about
/// 3.5 million digits; the index itself would fit up to `N = 62`.
pub const GOOD_MAX_N: i64 = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("range: N = {n} outside {lo}..={hi}")]
pub struct ClassicError {
    pub n: i64,
    pub lo: i64,
    pub hi: i64,
}

fn fib(n: i64) -> Rat {
    lucas_u(&Rat::one(), &Rat::from(-1), n).expect("Fibonacci parameters are valid")
}

/// `3 − F_{2^N − 1} / F_{2^N}`, which equals `Σ_{i=0}^{N} 1/F_{2^i}` for `N ≥ 1`.
///
/// At `N = 0` the formula gives 3 while the sum is `1/F_1 = 1`; the formula
/// value is returned.
pub fn classic_good(n: i64) -> Result<Rat, ClassicError> {
    if !(0..=GOOD_MAX_N).contains(&n) {
        return Err(ClassicError {
            n,
            lo: 0,
            hi: GOOD_MAX_N,
        });
    }
    let idx = 1i64 << n;
    let ratio = fib(idx - 1).checked_div(&fib(idx)).expect("F_{2^N} > 0");
    Ok(Rat::from(3) - ratio)
}

/// `Σ_{i≥0} 1/F_{2^i} = 7/2 − √5/2`.
pub fn classic_miller() -> QF {
    let half = Rat::new(1, 2).expect("nonzero");
    QF::new(Rat::from(7) * &half, -half, Rat::from(5)).expect("5 is not a square")
}
