//! Exact rationals in canonical form.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

/// Arbitrary-precision rational, always reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

/// The four field operations, for callers that select one at runtime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Rat, ArithError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Rat(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rat, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero {
                lhs: "1".into(),
                rhs: self.to_string(),
            });
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Rat, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero {
                lhs: self.to_string(),
                rhs: rhs.to_string(),
            });
        }
        Ok(Rat(mul(&self.0, &rhs.0.recip())))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Result<Rat, ArithError> {
        if exp < 0 && self.is_zero() {
            return Err(ArithError::ZeroToNegativePower);
        }
        let e = exp.unsigned_abs();
        let mut acc = BigRational::one();
        let mut base = self.0.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = mul(&base, &base);
            }
        }
        Ok(if exp < 0 { Rat(acc.recip()) } else { Rat(acc) })
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    /// `self * 10^exp` exactly (exp may be negative).
    pub fn scale10(&self, exp: i64) -> Rat {
        let p = num_traits::pow(BigInt::from(10u32), exp.unsigned_abs() as usize);
        if exp >= 0 {
            Rat(&self.0 * BigRational::from_integer(p))
        } else {
            Rat(&self.0 / BigRational::from_integer(p))
        }
    }

    /// Smallest multiple of 10^-digits that is >= self.
    pub fn round_up(&self, digits: u32) -> Rat {
        let p = num_traits::pow(BigInt::from(10u32), digits as usize);
        let c = -(-(self.0.numer() * &p)).div_floor(self.0.denom());
        Rat(BigRational::new(c, p))
    }

    /// Largest multiple of 10^-digits that is <= self.
    pub fn round_down(&self, digits: u32) -> Rat {
        let p = num_traits::pow(BigInt::from(10u32), digits as usize);
        let f = (self.0.numer() * &p).div_floor(self.0.denom());
        Rat(BigRational::new(f, p))
    }

    /// Exact square root if the value is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().magnitude();
        let d = self.denom().magnitude();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(Rat(BigRational::new(rn.into(), rd.into())))
        } else {
            None
        }
    }

    /// True if the decimal expansion terminates (denominator is 2^i 5^j).
    pub fn is_terminating(&self) -> bool {
        let mut d = self.denom().clone();
        let two = BigInt::from(2u32);
        let five = BigInt::from(5u32);
        while d.is_even() {
            d /= &two;
        }
        while (&d % &five).is_zero() {
            d /= &five;
        }
        d.is_one()
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

/// One field operation on two rationals.
pub fn rat_arith(lhs: &Rat, rhs: &Rat, op: ArithOp) -> Result<Rat, ArithError> {
    Ok(match op {
        ArithOp::Add => lhs + rhs,
        ArithOp::Sub => lhs - rhs,
        ArithOp::Mul => lhs * rhs,
        ArithOp::Div => lhs.checked_div(rhs)?,
    })
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_integer(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Rat {
        Rat::from_integer(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat::from_integer(n)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Rat {
        Rat(r)
    }
}

// num-rational reduces every result with a binary gcd, which costs one
// bignum subtraction per bit when an operand is 1. Integer operands are the
// common case here (recurrences over integer p, q), so they skip it.

fn add_sub(a: &BigRational, b: &BigRational, negate: bool) -> BigRational {
    let bn = if negate {
        -b.numer()
    } else {
        b.numer().clone()
    };
    match (a.denom().is_one(), b.denom().is_one()) {
        (true, true) => BigRational::new_raw(a.numer() + bn, BigInt::one()),
        // gcd(n + c·d, d) = gcd(n, d) = 1
        (false, true) => BigRational::new_raw(a.numer() + bn * a.denom(), a.denom().clone()),
        (true, false) => BigRational::new_raw(a.numer() * b.denom() + bn, b.denom().clone()),
        (false, false) if negate => a - b,
        (false, false) => a + b,
    }
}

fn mul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    // cross-cancel; the quotients are coprime, so the result is reduced
    let cancel = |n: &BigInt, d: &BigInt| if d.is_one() { BigInt::one() } else { n.gcd(d) };
    let g1 = cancel(a.numer(), b.denom());
    let g2 = cancel(b.numer(), a.denom());
    let part = |x: &BigInt, g: &BigInt| if g.is_one() { x.clone() } else { x / g };
    BigRational::new_raw(
        part(a.numer(), &g1) * part(b.numer(), &g2),
        part(a.denom(), &g2) * part(b.denom(), &g1),
    )
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                let ($a, $b) = (&self.0, &rhs.0);
                Rat($body)
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                (&self).$method(rhs)
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| add_sub(a, b, false));
forward_binop!(Sub, sub, |a, b| add_sub(a, b, true));
forward_binop!(Mul, mul, |a, b| mul(a, b));

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        self.is_integer() && self.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

/// Canonical text: `n` for integers, `n/d` otherwise.
impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rat({self})")
    }
}

/// Accepts `n`, `n/d`, decimals like `0.25` and scientific `1e-30`, each with an optional sign.
impl FromStr for Rat {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Rat, ArithError> {
        let t = s.trim();
        let bad = || ArithError::Parse(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rat::new(n, d).map_err(|_| bad());
        }
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(pos) => {
                let e: i64 = t[pos + 1..].parse().map_err(|_| bad())?;
                (&t[..pos], e)
            }
            None => (t, 0),
        };
        let (neg, body) = match mantissa.as_bytes().first() {
            Some(b'-') => (true, &mantissa[1..]),
            Some(b'+') => (false, &mantissa[1..]),
            _ => (false, mantissa),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .bytes()
            .chain(frac_part.bytes())
            .all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let n = if neg { -n } else { n };
        Ok(Rat::from_integer(n).scale10(exp - frac_part.len() as i64))
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Rat::from(n)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
