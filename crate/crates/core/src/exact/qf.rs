//! Exact arithmetic in the real quadratic field Q(√Δ).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::{ArithError, ArithOp, Rat};

/// Sign of a real number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn from_i32(s: i32) -> Sign {
        match s {
            s if s < 0 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// `x + y·√disc` with rational `x`, `y`, `disc`.
///
/// When `disc` is the square of a rational the radical is folded into `x`
/// at construction, so `y != 0` implies `disc` is not a rational square.
/// Values are only combined when their `disc` fields agree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QF {
    x: Rat,
    y: Rat,
    disc: Rat,
}

impl QF {
    pub fn new(x: Rat, y: Rat, disc: Rat) -> Result<QF, ArithError> {
        if disc.is_zero() {
            return Err(ArithError::ZeroDiscriminant);
        }
        if !y.is_zero() {
            if let Some(root) = disc.sqrt_exact() {
                return Ok(QF {
                    x: x + y * root,
                    y: Rat::zero(),
                    disc,
                });
            }
        }
        Ok(QF { x, y, disc })
    }

    pub fn from_rat(x: Rat, disc: &Rat) -> Result<QF, ArithError> {
        QF::new(x, Rat::zero(), disc.clone())
    }

    /// `√disc` itself.
    pub fn sqrt_disc(disc: &Rat) -> Result<QF, ArithError> {
        QF::new(Rat::zero(), Rat::one(), disc.clone())
    }

    pub fn zero(disc: &Rat) -> Result<QF, ArithError> {
        QF::from_rat(Rat::zero(), disc)
    }

    pub fn one(disc: &Rat) -> Result<QF, ArithError> {
        QF::from_rat(Rat::one(), disc)
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y(&self) -> &Rat {
        &self.y
    }

    pub fn disc(&self) -> &Rat {
        &self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    /// The rational value, if there is no radical part.
    pub fn as_rat(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.x)
    }

    fn same(&self, x: Rat, y: Rat) -> QF {
        // disc already validated and, if square, y is zero on input
        QF {
            x,
            y,
            disc: self.disc.clone(),
        }
    }

    pub fn conj(&self) -> QF {
        self.same(self.x.clone(), -&self.y)
    }

    /// `x² − y²·disc`, the product with the conjugate.
    pub fn norm(&self) -> Rat {
        &self.x * &self.x - &self.y * &self.y * &self.disc
    }

    fn check_disc(&self, rhs: &QF) -> Result<(), ArithError> {
        if self.disc != rhs.disc {
            return Err(ArithError::MismatchedDisc {
                lhs: self.disc.to_string(),
                rhs: rhs.disc.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &QF) -> Result<QF, ArithError> {
        self.check_disc(rhs)?;
        Ok(self.same(&self.x + &rhs.x, &self.y + &rhs.y))
    }

    pub fn try_sub(&self, rhs: &QF) -> Result<QF, ArithError> {
        self.check_disc(rhs)?;
        Ok(self.same(&self.x - &rhs.x, &self.y - &rhs.y))
    }

    pub fn try_mul(&self, rhs: &QF) -> Result<QF, ArithError> {
        self.check_disc(rhs)?;
        let x = &self.x * &rhs.x + &self.y * &rhs.y * &self.disc;
        let y = &self.x * &rhs.y + &self.y * &rhs.x;
        Ok(self.same(x, y))
    }

    /// Division through the conjugate: a/b = a·conj(b)/norm(b).
    pub fn try_div(&self, rhs: &QF) -> Result<QF, ArithError> {
        self.check_disc(rhs)?;
        if rhs.is_zero() {
            return Err(ArithError::QfDivisionByZero {
                lhs: self.to_string(),
                rhs: rhs.to_string(),
            });
        }
        let n = rhs.norm();
        let num = self.try_mul(&rhs.conj())?;
        // norm(b) = 0 with b != 0 only happens for square disc, which is folded away
        Ok(self.same(num.x.checked_div(&n)?, num.y.checked_div(&n)?))
    }

    pub fn recip(&self) -> Result<QF, ArithError> {
        QF::one(&self.disc)?.try_div(self)
    }

    pub fn add_rat(&self, r: &Rat) -> QF {
        self.same(&self.x + r, self.y.clone())
    }

    pub fn mul_rat(&self, r: &Rat) -> QF {
        self.same(&self.x * r, &self.y * r)
    }

    pub fn div_rat(&self, r: &Rat) -> Result<QF, ArithError> {
        Ok(self.same(self.x.checked_div(r)?, self.y.checked_div(r)?))
    }

    /// Binary exponentiation; negative exponents go through the reciprocal.
    pub fn pow(&self, exp: i64) -> Result<QF, ArithError> {
        if exp < 0 && self.is_zero() {
            return Err(ArithError::ZeroToNegativePower);
        }
        let mut base = if exp < 0 { self.recip()? } else { self.clone() };
        let mut acc = QF::one(&self.disc)?;
        let mut k = exp.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Exact sign in the real embedding with √disc > 0.
    pub fn sign(&self) -> Result<Sign, ArithError> {
        if self.disc.is_negative() {
            return Err(ArithError::NonRealDisc(self.disc.to_string()));
        }
        let sx = self.x.signum();
        let sy = self.y.signum();
        if sy == 0 {
            return Ok(Sign::from_i32(sx));
        }
        if sx == 0 || sx == sy {
            return Ok(Sign::from_i32(sy));
        }
        // opposite signs: compare x² with y²·disc
        let x2 = &self.x * &self.x;
        let y2d = &self.y * &self.y * &self.disc;
        Ok(match x2.cmp(&y2d) {
            std::cmp::Ordering::Greater => Sign::from_i32(sx),
            std::cmp::Ordering::Less => Sign::from_i32(sy),
            std::cmp::Ordering::Equal => Sign::Zero,
        })
    }

    pub fn abs(&self) -> Result<QF, ArithError> {
        Ok(match self.sign()? {
            Sign::Negative => -self,
            _ => self.clone(),
        })
    }

    /// Exact comparison of two real values with the same disc.
    pub fn cmp_real(&self, rhs: &QF) -> Result<std::cmp::Ordering, ArithError> {
        Ok(match self.try_sub(rhs)?.sign()? {
            Sign::Negative => std::cmp::Ordering::Less,
            Sign::Zero => std::cmp::Ordering::Equal,
            Sign::Positive => std::cmp::Ordering::Greater,
        })
    }

    /// Integers `lo <= self·10^scale <= hi` with `hi − lo <= 2`.
    pub fn scaled_bounds(&self, scale: i64) -> Result<(BigInt, BigInt), ArithError> {
        if self.disc.is_negative() {
            return Err(ArithError::NonRealDisc(self.disc.to_string()));
        }
        let xs = self.x.scale10(scale);
        if self.y.is_zero() {
            return Ok((xs.floor(), xs.ceil()));
        }
        // y·√disc·10^s = sign(y)·√z, z = y²·disc·10^(2s) = zn/zd
        let z = (&self.y * &self.y * &self.disc).scale10(2 * scale);
        let zd = z.denom().clone();
        let t = (z.numer() * &zd).sqrt();
        let low = Rat::new(t.clone(), zd.clone())?;
        let high = Rat::new(t + 1, zd)?;
        let (lo, hi) = if self.y.is_positive() {
            (&xs + &low, &xs + &high)
        } else {
            (&xs - &high, &xs - &low)
        };
        Ok((lo.floor(), hi.ceil()))
    }

    /// A rational `r >= self` within `10^-digits`.
    pub fn upper_rat(&self, digits: u32) -> Result<Rat, ArithError> {
        if let Some(r) = self.as_rat() {
            return Ok(r.clone());
        }
        let (_, hi) = self.scaled_bounds(digits as i64)?;
        Ok(Rat::from_integer(hi).scale10(-(digits as i64)))
    }

    /// A rational `r <= self` within `10^-digits`.
    pub fn lower_rat(&self, digits: u32) -> Result<Rat, ArithError> {
        if let Some(r) = self.as_rat() {
            return Ok(r.clone());
        }
        let (lo, _) = self.scaled_bounds(digits as i64)?;
        Ok(Rat::from_integer(lo).scale10(-(digits as i64)))
    }

    /// Approximate value, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let d = self.disc.to_f64().unwrap_or(f64::NAN);
        self.x.to_f64().unwrap_or(f64::NAN) + self.y.to_f64().unwrap_or(f64::NAN) * d.abs().sqrt()
    }
}

/// One field operation on two quadratic-field values.
pub fn qf_arith(lhs: &QF, rhs: &QF, op: ArithOp) -> Result<QF, ArithError> {
    match op {
        ArithOp::Add => lhs.try_add(rhs),
        ArithOp::Sub => lhs.try_sub(rhs),
        ArithOp::Mul => lhs.try_mul(rhs),
        ArithOp::Div => lhs.try_div(rhs),
    }
}

// Operator impls assume a shared disc and panic otherwise; use the `try_*`
// methods when mixing values from different sequences.
macro_rules! qf_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QF> for &QF {
            type Output = QF;
            fn $method(self, rhs: &QF) -> QF {
                self.$checked(rhs)
                    .expect("QF operands with mismatched discriminants")
            }
        }
        impl $tr<QF> for QF {
            type Output = QF;
            fn $method(self, rhs: QF) -> QF {
                (&self).$method(&rhs)
            }
        }
    };
}

qf_binop!(Add, add, try_add);
qf_binop!(Sub, sub, try_sub);
qf_binop!(Mul, mul, try_mul);

impl Neg for &QF {
    type Output = QF;
    fn neg(self) -> QF {
        self.same(-&self.x, -&self.y)
    }
}

impl Neg for QF {
    type Output = QF;
    fn neg(self) -> QF {
        -&self
    }
}

/// `x + y*sqrt(D)` for irrational values, the plain rational otherwise.
impl fmt::Display for QF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{} + {}*sqrt({})", self.x, self.y, self.disc)
        }
    }
}

impl fmt::Debug for QF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QF({} + {}*sqrt({}))", self.x, self.y, self.disc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn q5(x: &str, y: &str) -> QF {
        QF::new(r(x), r(y), r("5")).unwrap()
    }

    #[test]
    fn golden_roots() {
        let alpha = q5("1/2", "1/2");
        let beta = q5("1/2", "-1/2");
        assert_eq!(
            qf_arith(&alpha, &beta, ArithOp::Mul).unwrap(),
            q5("-1", "0")
        );
        assert_eq!(qf_arith(&alpha, &beta, ArithOp::Add).unwrap(), q5("1", "0"));
    }

    #[test]
    fn powers() {
        let alpha = q5("1/2", "1/2");
        assert_eq!(alpha.pow(2).unwrap(), q5("3/2", "1/2"));
        assert_eq!(alpha.pow(0).unwrap(), q5("1", "0"));
        let inv = alpha.pow(-1).unwrap();
        assert_eq!(inv, q5("-1/2", "1/2"));
        assert_eq!(&inv * &alpha, q5("1", "0"));
        assert!(QF::zero(&r("5")).unwrap().pow(-2).is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(q5("0", "0").sign().unwrap(), Sign::Zero);
        assert_eq!(q5("-2", "1").sign().unwrap(), Sign::Positive);
        assert_eq!(q5("3", "-2").sign().unwrap(), Sign::Negative);
        let complex = QF::new(r("1"), r("1"), r("-3")).unwrap();
        assert!(matches!(complex.sign(), Err(ArithError::NonRealDisc(_))));
    }

    #[test]
    fn square_disc_folds() {
        let v = QF::new(r("1"), r("2"), r("9/4")).unwrap();
        assert!(v.is_rational());
        assert_eq!(v.x(), &r("4"));
        assert!(QF::new(r("1"), r("1"), r("0")).is_err());
    }

    #[test]
    fn mismatched_disc_and_div_zero() {
        let a = q5("1", "1");
        let b = QF::new(r("1"), r("1"), r("2")).unwrap();
        assert!(matches!(
            a.try_add(&b),
            Err(ArithError::MismatchedDisc { .. })
        ));
        assert!(a.try_div(&q5("0", "0")).is_err());
    }

    #[test]
    fn norm_and_display() {
        let v = q5("7/2", "-1/2");
        assert_eq!(v.norm(), r("11"));
        assert_eq!(v.to_string(), "7/2 + -1/2*sqrt(5)");
        assert_eq!(q5("1/6", "0").to_string(), "1/6");
    }

    #[test]
    fn bounds_bracket_value() {
        let v = q5("-2", "1");
        let lo = v.lower_rat(30).unwrap();
        let hi = v.upper_rat(30).unwrap();
        assert!(lo < hi);
        let lo_q = QF::from_rat(lo, &r("5")).unwrap();
        let hi_q = QF::from_rat(hi, &r("5")).unwrap();
        assert_eq!(lo_q.cmp_real(&v).unwrap(), std::cmp::Ordering::Less);
        assert_eq!(hi_q.cmp_real(&v).unwrap(), std::cmp::Ordering::Greater);
    }
}
