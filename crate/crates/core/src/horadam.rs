//! Horadam sequences `w_n(a, b; p, q)` and the Lucas sequences `u_n`, `v_n`.
//!
//! Terms are computed for any 64-bit index by fast doubling on
//! `(u_n, u_{n+1})`, so cost grows with `log |n|` rather than `|n|`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact::{ArithError, Rat, Sign, QF};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("zero-discriminant: p^2 - 4q = 0")]
    ZeroDiscriminant,
    #[error("zero-q: q must be nonzero")]
    ZeroQ,
}

impl ParamError {
    pub fn reason(&self) -> &'static str {
        match self {
            ParamError::ZeroDiscriminant => "zero-discriminant",
            ParamError::ZeroQ => "zero-q",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HorizonError {
    #[error("precondition-violation: {0}")]
    Precondition(&'static str),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Which sequence of a `(p, q)` family is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SeqKind {
    /// General seeds `(a, b)`.
    W,
    /// Lucas sequence of the first kind, seeds `(0, 1)`.
    U,
    /// Lucas sequence of the second kind, seeds `(2, p)`.
    V,
}

impl SeqKind {
    /// The seeds this kind forces, or the given ones for `W`.
    pub fn seeds(self, a: &Rat, b: &Rat, p: &Rat) -> (Rat, Rat) {
        match self {
            SeqKind::W => (a.clone(), b.clone()),
            SeqKind::U => (Rat::zero(), Rat::one()),
            SeqKind::V => (Rat::from(2), p.clone()),
        }
    }
}

impl fmt::Display for SeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeqKind::W => "W",
            SeqKind::U => "U",
            SeqKind::V => "V",
        })
    }
}

impl std::str::FromStr for SeqKind {
    type Err = String;
    fn from_str(s: &str) -> Result<SeqKind, String> {
        match s {
            "W" | "w" => Ok(SeqKind::W),
            "U" | "u" => Ok(SeqKind::U),
            "V" | "v" => Ok(SeqKind::V),
            _ => Err(format!("unknown sequence kind {s:?}")),
        }
    }
}

/// A validated Horadam instance with its derived constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoradamParams {
    a: Rat,
    b: Rat,
    p: Rat,
    q: Rat,
    disc: Rat,
    e_w: Rat,
    big_a: QF,
    big_b: QF,
    alpha: QF,
    beta: QF,
}

impl HoradamParams {
    pub fn new(a: Rat, b: Rat, p: Rat, q: Rat) -> Result<HoradamParams, ParamError> {
        if q.is_zero() {
            return Err(ParamError::ZeroQ);
        }
        let disc = &p * &p - Rat::from(4) * &q;
        if disc.is_zero() {
            return Err(ParamError::ZeroDiscriminant);
        }
        let half = Rat::new(1, 2).expect("nonzero");
        let root = QF::sqrt_disc(&disc).expect("nonzero disc");
        let p_qf = QF::from_rat(p.clone(), &disc).expect("nonzero disc");
        let alpha = (&p_qf + &root).mul_rat(&half);
        let beta = (&p_qf - &root).mul_rat(&half);
        let b_qf = QF::from_rat(b.clone(), &disc).expect("nonzero disc");
        let big_a = &b_qf - &beta.mul_rat(&a);
        let big_b = &b_qf - &alpha.mul_rat(&a);
        let e_w = &p * &a * &b - &q * &a * &a - &b * &b;
        Ok(HoradamParams {
            a,
            b,
            p,
            q,
            disc,
            e_w,
            big_a,
            big_b,
            alpha,
            beta,
        })
    }

    /// Instance of the given kind over `(p, q)`; `a`, `b` only matter for `W`.
    pub fn of_kind(
        kind: SeqKind,
        a: Rat,
        b: Rat,
        p: Rat,
        q: Rat,
    ) -> Result<HoradamParams, ParamError> {
        let (a, b) = kind.seeds(&a, &b, &p);
        HoradamParams::new(a, b, p, q)
    }

    pub fn fibonacci() -> HoradamParams {
        HoradamParams::new(0.into(), 1.into(), 1.into(), (-1).into()).expect("valid")
    }

    pub fn lucas() -> HoradamParams {
        HoradamParams::new(2.into(), 1.into(), 1.into(), (-1).into()).expect("valid")
    }

    pub fn pell() -> HoradamParams {
        HoradamParams::new(0.into(), 1.into(), 2.into(), (-1).into()).expect("valid")
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }
    pub fn b(&self) -> &Rat {
        &self.b
    }
    pub fn p(&self) -> &Rat {
        &self.p
    }
    pub fn q(&self) -> &Rat {
        &self.q
    }
    /// `Δ = p² − 4q`.
    pub fn disc(&self) -> &Rat {
        &self.disc
    }
    /// `e_w = pab − qa² − b²`.
    pub fn e_w(&self) -> &Rat {
        &self.e_w
    }
    /// `A = b − aβ`.
    pub fn big_a(&self) -> &QF {
        &self.big_a
    }
    /// `B = b − aα`.
    pub fn big_b(&self) -> &QF {
        &self.big_b
    }
    /// The root `(p + √Δ)/2`.
    pub fn alpha(&self) -> &QF {
        &self.alpha
    }
    /// The root `(p − √Δ)/2`.
    pub fn beta(&self) -> &QF {
        &self.beta
    }

    /// The Lucas first-kind instance over the same `(p, q)`.
    pub fn u_params(&self) -> HoradamParams {
        HoradamParams::new(Rat::zero(), Rat::one(), self.p.clone(), self.q.clone())
            .expect("already validated")
    }

    /// The Lucas second-kind instance over the same `(p, q)`.
    pub fn v_params(&self) -> HoradamParams {
        HoradamParams::new(Rat::from(2), self.p.clone(), self.p.clone(), self.q.clone())
            .expect("already validated")
    }

    /// Which of `U`, `V` this instance coincides with, else `W`.
    pub fn kind(&self) -> SeqKind {
        if self.a.is_zero() && self.b == 1 {
            SeqKind::U
        } else if self.a == 2 && self.b == self.p {
            SeqKind::V
        } else {
            SeqKind::W
        }
    }

    /// `w_n` for any integer `n`.
    pub fn term(&self, n: i64) -> Rat {
        if n >= 0 {
            let (un, un1) = lucas_pair(&self.p, &self.q, n.unsigned_abs());
            self.w_from_pair(&un, &un1)
        } else {
            let m = n.unsigned_abs();
            let (um, um1) = lucas_pair(&self.p, &self.q, m);
            let wm = self.w_from_pair(&um, &um1);
            let vm = &um1 * Rat::from(2) - &self.p * &um;
            let qm = q_pow_u(&self.q, m);
            (&self.a * &vm - wm).checked_div(&qm).expect("q is nonzero")
        }
    }

    // w_n = a·u_{n+1} + (b − pa)·u_n
    fn w_from_pair(&self, un: &Rat, un1: &Rat) -> Rat {
        &self.a * un1 + (&self.b - &self.p * &self.a) * un
    }

    /// `u_n(p, q)` for any integer `n`.
    pub fn u(&self, n: i64) -> Rat {
        u_any(&self.p, &self.q, n)
    }

    /// `v_n(p, q)` for any integer `n`.
    pub fn v(&self, n: i64) -> Rat {
        v_any(&self.p, &self.q, n)
    }
}

impl fmt::Display for HoradamParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "w(a={}, b={}; p={}, q={})",
            self.a, self.b, self.p, self.q
        )
    }
}

fn q_pow_u(q: &Rat, m: u64) -> Rat {
    q.pow(m as i64).expect("nonnegative exponent")
}

/// `(u_n, u_{n+1})` by fast doubling over the bits of `n`.
fn lucas_pair(p: &Rat, q: &Rat, n: u64) -> (Rat, Rat) {
    let mut uk = Rat::zero();
    let mut uk1 = Rat::one();
    if n == 0 {
        return (uk, uk1);
    }
    let two = Rat::from(2);
    for bit in (0..64 - n.leading_zeros()).rev() {
        // u_{2k} = u_k (2u_{k+1} − p u_k), u_{2k+1} = u_{k+1}² − q u_k²
        let u2k = &uk * (&uk1 * &two - p * &uk);
        let u2k1 = &uk1 * &uk1 - q * &uk * &uk;
        if (n >> bit) & 1 == 1 {
            let u2k2 = p * &u2k1 - q * &u2k;
            uk = u2k1;
            uk1 = u2k2;
        } else {
            uk = u2k;
            uk1 = u2k1;
        }
    }
    (uk, uk1)
}

fn u_any(p: &Rat, q: &Rat, n: i64) -> Rat {
    let m = n.unsigned_abs();
    let (um, _) = lucas_pair(p, q, m);
    if n >= 0 {
        um
    } else {
        // u_{−m} = −u_m q^{−m}
        -(um.checked_div(&q_pow_u(q, m)).expect("q is nonzero"))
    }
}

fn v_any(p: &Rat, q: &Rat, n: i64) -> Rat {
    let m = n.unsigned_abs();
    let (um, um1) = lucas_pair(p, q, m);
    let vm = &um1 * Rat::from(2) - p * &um;
    if n >= 0 {
        vm
    } else {
        vm.checked_div(&q_pow_u(q, m)).expect("q is nonzero")
    }
}

fn check_pq(p: &Rat, q: &Rat) -> Result<(), ParamError> {
    if q.is_zero() {
        return Err(ParamError::ZeroQ);
    }
    if (p * p - Rat::from(4) * q).is_zero() {
        return Err(ParamError::ZeroDiscriminant);
    }
    Ok(())
}

/// `u_n(p, q)`, Lucas sequence of the first kind.
pub fn lucas_u(p: &Rat, q: &Rat, n: i64) -> Result<Rat, ParamError> {
    check_pq(p, q)?;
    Ok(u_any(p, q, n))
}

/// `v_n(p, q)`, Lucas sequence of the second kind.
pub fn lucas_v(p: &Rat, q: &Rat, n: i64) -> Result<Rat, ParamError> {
    check_pq(p, q)?;
    Ok(v_any(p, q, n))
}

/// `w_n w_{n+r+s} − w_{n+r} w_{n+s} − e_w qⁿ u_r u_s`, which is identically zero.
pub fn identity_4_1_residual(params: &HoradamParams, n: i64, r: i64, s: i64) -> Rat {
    let w = |i: i64| params.term(i);
    let lhs = w(n) * w(n + r + s) - w(n + r) * w(n + s);
    let rhs = params.e_w() * params.q().pow(n).expect("q is nonzero") * params.u(r) * params.u(s);
    lhs - rhs
}

/// Smallest `N₀ >= 0` with `w_n != 0` for every `n >= N₀`.
///
/// Requires `Δ > 0`, `p > 0` (so `|α| > |β|`) and `e_w != 0`. The Binet bound
/// `|A||α|ⁿ > |B||β|ⁿ` is located with squared quantities in Q(√Δ), then the
/// result is lowered while the terms below it stay nonzero.
pub fn nonvanishing_horizon(params: &HoradamParams) -> Result<i64, HorizonError> {
    if !params.disc().is_positive() {
        return Err(HorizonError::Precondition("discriminant must be positive"));
    }
    if !params.p().is_positive() {
        return Err(HorizonError::Precondition(
            "p must be positive so that |alpha| > |beta|",
        ));
    }
    if params.e_w().is_zero() {
        return Err(HorizonError::Precondition("e_w must be nonzero"));
    }
    let ratio = params.alpha().try_div(params.beta())?.pow(2)?;
    let target = params.big_b().try_div(params.big_a())?.pow(2)?;
    let holds = |n: i64| -> Result<bool, ArithError> {
        Ok(ratio.pow(n)?.try_sub(&target)?.sign()? == Sign::Positive)
    };
    let bound = if holds(0)? {
        0
    } else {
        let mut hi: i64 = 1;
        while !holds(hi)? {
            hi = hi
                .checked_mul(2)
                .ok_or(HorizonError::Precondition("horizon exceeds index range"))?;
        }
        let mut lo = hi / 2;
        // holds(hi), !holds(lo)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if holds(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let mut n0 = bound;
    while n0 > 0 && !params.term(n0 - 1).is_zero() {
        n0 -= 1;
    }
    Ok(n0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn params(a: i64, b: i64, p: i64, q: i64) -> HoradamParams {
        HoradamParams::new(a.into(), b.into(), p.into(), q.into()).unwrap()
    }

    // backwards recurrence w_{n−2} = (p·w_{n−1} − w_n)/q
    fn backwards(p: &HoradamParams, n: i64) -> Rat {
        let (mut hi, mut lo) = (p.b().clone(), p.a().clone());
        for _ in 0..(-n) {
            let next = (p.p() * &lo - &hi).checked_div(p.q()).unwrap();
            hi = lo;
            lo = next;
        }
        lo
    }

    #[test]
    fn constructors() {
        assert_eq!(HoradamParams::fibonacci().e_w(), &Rat::from(-1));
        assert_eq!(HoradamParams::lucas().e_w(), &Rat::from(5));
        assert_eq!(
            HoradamParams::new(0.into(), 1.into(), 2.into(), 1.into()),
            Err(ParamError::ZeroDiscriminant)
        );
        assert_eq!(
            HoradamParams::new(0.into(), 1.into(), 2.into(), 0.into()),
            Err(ParamError::ZeroQ)
        );
    }

    #[test]
    fn derived_constants() {
        let f = params(3, -2, 5, 3);
        let e = f.big_a() * f.big_b();
        assert_eq!(e.as_rat().unwrap(), &(-f.e_w()));
        assert_eq!((f.alpha() + f.beta()).as_rat().unwrap(), f.p());
        assert_eq!((f.alpha() * f.beta()).as_rat().unwrap(), f.q());
        assert_eq!(f.alpha().y(), &r("1/2"));
    }

    #[test]
    fn terms() {
        let fib = HoradamParams::fibonacci();
        assert_eq!(fib.term(10), Rat::from(55));
        assert_eq!(fib.term(-5), Rat::from(5));
        assert_eq!(backwards(&fib, -5), Rat::from(5));
        assert_eq!(HoradamParams::lucas().term(5), Rat::from(11));
        let odd = params(3, -2, 5, 3);
        for n in -12..0 {
            assert_eq!(odd.term(n), backwards(&odd, n), "n = {n}");
        }
    }

    #[test]
    fn lucas_sequences() {
        let one = Rat::from(1);
        let m1 = Rat::from(-1);
        assert_eq!(lucas_u(&one, &m1, 7).unwrap(), Rat::from(13));
        assert_eq!(lucas_v(&Rat::from(2), &m1, 4).unwrap(), Rat::from(34));
        assert_eq!(lucas_u(&one, &m1, -4).unwrap(), Rat::from(-3));
        assert_eq!(
            lucas_u(&Rat::from(2), &one, 3),
            Err(ParamError::ZeroDiscriminant)
        );
    }

    #[test]
    fn identity_residuals() {
        let fib = HoradamParams::fibonacci();
        assert!(identity_4_1_residual(&fib, 3, 2, 5).is_zero());
        assert!(identity_4_1_residual(&HoradamParams::pell(), -2, 1, 4).is_zero());
    }

    #[test]
    fn horizons() {
        assert_eq!(
            nonvanishing_horizon(&HoradamParams::fibonacci()).unwrap(),
            1
        );
        assert_eq!(nonvanishing_horizon(&HoradamParams::lucas()).unwrap(), 0);
        let degenerate = params(1, 2, 3, 2);
        assert!(degenerate.e_w().is_zero());
        assert!(matches!(
            nonvanishing_horizon(&degenerate),
            Err(HorizonError::Precondition(_))
        ));
        assert!(nonvanishing_horizon(&params(0, 1, -1, -1)).is_err());
        assert!(nonvanishing_horizon(&params(0, 1, 1, 1)).is_err());
    }

    #[test]
    fn horizon_matches_scan() {
        // w_n = 5·2ⁿ − 160·1ⁿ over (p, q) = (3, 2): zero at n = 5, then nonzero
        let p = params(-155, -150, 3, 2);
        assert!(p.term(5).is_zero());
        assert_eq!(nonvanishing_horizon(&p).unwrap(), 6);
        for n in 6..40 {
            assert!(!p.term(n).is_zero());
        }
    }
}
