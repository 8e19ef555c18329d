//! Decimal rendering of exact values.
//!
//! Irrational values are rounded to nearest from a working approximation
//! carrying [`GUARD_DIGITS`] extra digits, so the printed value is within one
//! unit of the last digit. Rationals with a terminating expansion that fits
//! in the requested precision are printed exactly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ArithError, Rat, Sign, QF};

pub const GUARD_DIGITS: usize = 20;

/// A value `±0.d₁d₂…dₚ × 10^(exponent+1)`, i.e. `d₁.d₂… × 10^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    pub negative: bool,
    /// Significant digits, no leading zeros (`"0"` for zero).
    pub digits: String,
    /// Decimal exponent of the leading digit.
    pub exponent: i64,
    /// Requested significant digits.
    pub precision: usize,
    /// True when `digits` is the exact value.
    pub exact: bool,
}

fn pow10(n: usize) -> BigInt {
    num_traits::pow(BigInt::from(10u32), n)
}

fn digit_count(n: &BigInt) -> usize {
    if n.is_zero() {
        1
    } else {
        n.abs().to_str_radix(10).len()
    }
}

/// Round a positive integer to `precision` significant digits (half up).
/// Returns the digit string and the change in the leading-digit position.
fn round_sig(n: &BigInt, precision: usize) -> (String, i64) {
    let nd = digit_count(n);
    if nd <= precision {
        return (n.to_str_radix(10), 0);
    }
    let drop = pow10(nd - precision);
    let (mut q, rem) = n.div_rem(&drop);
    if &rem * 2 >= drop {
        q += 1;
    }
    let s = q.to_str_radix(10);
    if s.len() > precision {
        // carried into a new leading digit: 99.9 -> 100
        (s[..precision].to_string(), 1)
    } else {
        (s, 0)
    }
}

impl Decimal {
    fn zero(precision: usize) -> Decimal {
        Decimal {
            negative: false,
            digits: "0".into(),
            exponent: 0,
            precision,
            exact: true,
        }
    }

    pub fn from_rat(v: &Rat, precision: usize) -> Result<Decimal, ArithError> {
        if precision == 0 {
            return Err(ArithError::BadPrecision);
        }
        if v.is_zero() {
            return Ok(Decimal::zero(precision));
        }
        let negative = v.is_negative();
        let a = v.abs();
        if a.is_terminating() {
            // smallest s with a·10^s integral
            let mut s: i64 = 0;
            let mut d = a.denom().clone();
            while !d.is_one() {
                let g = d.gcd(&BigInt::from(10u32));
                d /= &g;
                s += 1;
            }
            let mut n = a.scale10(s).floor();
            let ten = BigInt::from(10u32);
            while (&n % &ten).is_zero() {
                n /= &ten;
                s -= 1;
            }
            let nd = digit_count(&n) as i64;
            if nd as usize <= precision {
                return Ok(Decimal {
                    negative,
                    digits: n.to_str_radix(10),
                    exponent: nd - 1 - s,
                    precision,
                    exact: true,
                });
            }
        }
        // exact floor at a scale with enough digits, then round half up
        let num_digits = digit_count(a.numer()) as i64;
        let den_digits = digit_count(a.denom()) as i64;
        let mut s = precision as i64 + 2 - (num_digits - den_digits);
        let mut n = a.scale10(s).floor();
        while digit_count(&n) < precision + 1 {
            s += 1;
            n = a.scale10(s).floor();
        }
        let rem_is_zero = Rat::from_integer(n.clone()) == a.scale10(s);
        let nd = digit_count(&n) as i64;
        let (digits, bump) = if rem_is_zero {
            round_sig(&n, precision)
        } else {
            // a sticky digit keeps exact halves from rounding down
            round_sig(&(&n * 10 + 1), precision)
        };
        Ok(Decimal {
            negative,
            digits: trim_zeros(digits),
            exponent: nd - 1 - s + bump,
            precision,
            exact: false,
        })
    }

    pub fn from_qf(v: &QF, precision: usize) -> Result<Decimal, ArithError> {
        if precision == 0 {
            return Err(ArithError::BadPrecision);
        }
        if let Some(r) = v.as_rat() {
            return Decimal::from_rat(r, precision);
        }
        let sign = v.sign()?;
        if sign == Sign::Zero {
            return Ok(Decimal::zero(precision));
        }
        let a = if sign == Sign::Negative {
            -v
        } else {
            v.clone()
        };
        let want = precision + GUARD_DIGITS;
        let mut s = want as i64;
        let lo = loop {
            let (lo, _hi) = a.scaled_bounds(s)?;
            let nd = digit_count(&lo);
            if lo.is_zero() || nd < want {
                // too coarse: move the scale by the missing digit count
                let step = if lo.is_zero() {
                    want.max(s.unsigned_abs() as usize)
                } else {
                    want - nd
                };
                s += step as i64;
            } else if nd > want + 8 {
                s -= (nd - want) as i64;
            } else {
                break lo;
            }
        };
        let nd = digit_count(&lo) as i64;
        let (digits, bump) = round_sig(&lo, precision);
        Ok(Decimal {
            negative: sign == Sign::Negative,
            digits,
            exponent: nd - 1 - s + bump,
            precision,
            exact: false,
        })
    }
}

fn trim_zeros(s: String) -> String {
    let t = s.trim_end_matches('0');
    if t.is_empty() {
        "0".into()
    } else {
        t.to_string()
    }
}

/// Positional for `10^-6 <= |v| < 10^18`, otherwise `d.ddd` with an `eN` suffix.
impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        let d = &self.digits;
        let e = self.exponent;
        if (-6..=17).contains(&e) {
            if e >= 0 {
                let int_len = e as usize + 1;
                if d.len() <= int_len {
                    write!(f, "{}{}.0", d, "0".repeat(int_len - d.len()))
                } else {
                    write!(f, "{}.{}", &d[..int_len], &d[int_len..])
                }
            } else {
                write!(f, "0.{}{}", "0".repeat((-e - 1) as usize), d)
            }
        } else {
            let frac = if d.len() > 1 { &d[1..] } else { "0" };
            write!(f, "{}.{}e{}", &d[..1], frac, e)
        }
    }
}

pub fn qf_to_decimal(v: &QF, precision: usize) -> Result<Decimal, ArithError> {
    Decimal::from_qf(v, precision)
}
