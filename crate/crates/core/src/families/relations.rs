//! Relations between `u` and `v` that fall out of comparing two closed forms
//! of the same sum.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ValidateError;
use crate::exact::Rat;
use crate::horadam::{lucas_u, lucas_v, HoradamParams};

/// Which relation to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// `Σ (u/v at m(i+N−k) − u/v at m(i−k)) = (2/Δ) Σ (v_{·+1}/v_·, same indices)`.
    First,
    /// `Σ (v_{mi}/u_{mi} − v_{m(i+N)}/u_{m(i+N)})
    ///   = (2q^{mk}/u_{mk}) Σ (u_{m(i+N−k)}/u_{m(i+N)} − u_{m(i−k)}/u_{mi})`.
    Second,
    /// [`Relation::Second`] with `u_{m(i+N−k)+1}` in the first numerator,
    /// which does not hold in general.
    SecondShifted,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::First => "1",
            Relation::Second => "2",
            Relation::SecondShifted => "2+1",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Relation {
    type Err = String;
    fn from_str(s: &str) -> Result<Relation, String> {
        match s.trim() {
            "1" => Ok(Relation::First),
            "2" => Ok(Relation::Second),
            "2+1" | "2-shifted" => Ok(Relation::SecondShifted),
            _ => Err(format!("unknown relation {s:?}; expected 1, 2 or 2+1")),
        }
    }
}

struct Lucas<'a> {
    p: &'a Rat,
    q: &'a Rat,
}

impl Lucas<'_> {
    fn u(&self, n: i64) -> Rat {
        lucas_u(self.p, self.q, n).expect("parameters already validated")
    }

    fn v(&self, n: i64) -> Rat {
        lucas_v(self.p, self.q, n).expect("parameters already validated")
    }
}

fn quot(num: Rat, den: Rat, seq: char, index: i64) -> Result<Rat, ValidateError> {
    if den.is_zero() {
        return Err(ValidateError::ZeroDenominatorAt { seq, index });
    }
    Ok(num.checked_div(&den)?)
}

/// Left side minus right side of the relation over the `(p, q)` of `params`.
pub fn byproduct_relation_residual(
    which: Relation,
    params: &HoradamParams,
    m: i64,
    k: i64,
    big_n: i64,
) -> Result<Rat, ValidateError> {
    if k < 1 {
        return Err(ValidateError::BadParameter(format!(
            "k must be >= 1, got {k}"
        )));
    }
    if m == 0 {
        return Err(ValidateError::BadParameter("m must be nonzero".into()));
    }
    for (name, v) in [("m", m), ("k", k), ("N", big_n)] {
        if v.abs() > super::MAX_PARAM {
            return Err(ValidateError::BadParameter(format!(
                "|{name}| exceeds {}",
                super::MAX_PARAM
            )));
        }
    }
    let l = Lucas {
        p: params.p(),
        q: params.q(),
    };
    let mut lhs = Rat::zero();
    let mut rhs = Rat::zero();
    match which {
        Relation::First => {
            for i in 1..=2 * k {
                let hi = m * (i + big_n - k);
                let lo = m * (i - k);
                lhs = lhs + quot(l.u(hi), l.v(hi), 'v', hi)? - quot(l.u(lo), l.v(lo), 'v', lo)?;
                rhs = rhs + quot(l.v(hi + 1), l.v(hi), 'v', hi)?
                    - quot(l.v(lo + 1), l.v(lo), 'v', lo)?;
            }
            rhs = rhs * Rat::from(2).checked_div(params.disc())?;
        }
        Relation::Second | Relation::SecondShifted => {
            let shift = i64::from(which == Relation::SecondShifted);
            for i in 1..=2 * k {
                let (a, b) = (m * i, m * (i + big_n));
                lhs = lhs + quot(l.v(a), l.u(a), 'u', a)? - quot(l.v(b), l.u(b), 'u', b)?;
                let top = m * (i + big_n - k) + shift;
                rhs =
                    rhs + quot(l.u(top), l.u(b), 'u', b)? - quot(l.u(m * (i - k)), l.u(a), 'u', a)?;
            }
            let umk = l.u(m * k);
            let scale = quot(Rat::from(2) * params.q().pow(m * k)?, umk, 'u', m * k)?;
            rhs = rhs * scale;
        }
    }
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_hold_on_small_cases() {
        for params in [HoradamParams::fibonacci(), HoradamParams::pell()] {
            for m in 1..=3 {
                for k in 1..=3 {
                    for n in 0..=4 {
                        assert!(
                            byproduct_relation_residual(Relation::First, &params, m, k, n)
                                .unwrap()
                                .is_zero()
                        );
                        assert!(
                            byproduct_relation_residual(Relation::Second, &params, m, k, n)
                                .unwrap()
                                .is_zero()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn shifted_variant_fails() {
        let r = byproduct_relation_residual(
            Relation::SecondShifted,
            &HoradamParams::fibonacci(),
            1,
            1,
            1,
        )
        .unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn zero_denominators_are_named() {
        // (1, 1) has u_3 = 0
        let periodic = HoradamParams::new(0.into(), 1.into(), 1.into(), 1.into()).unwrap();
        let e = byproduct_relation_residual(Relation::Second, &periodic, 3, 1, 1).unwrap_err();
        assert_eq!(e.reason(), "zero-denominator-at");
    }
}
