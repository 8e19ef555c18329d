//! Brute-force evaluation, independent of the closed forms.
//!
//! Sequence terms come from a plain recurrence table grown in both
//! directions, not from fast doubling, so a bug in one path cannot hide in
//! the other. Infinite sums are bracketed by an exact partial sum and a
//! rigorous geometric tail bound.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{ArithError, Rat, QF};
use crate::families::{structural, SumSpec, ValidateError};
use crate::horadam::SeqKind;

/// Terms summed before [`direct_infinite`] gives up.
pub const MAX_TERMS: usize = 100_000;

/// Digits kept in the rational upper bounds behind the tail estimate.
const BOUND_DIGITS: u32 = 60;

pub const GOOD_DIRECT_MAX: i64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Spec(#[from] ValidateError),
    #[error("iteration-cap: {terms} terms reached tail bound {achieved} only")]
    IterationCap { terms: usize, achieved: String },
    #[error("window-underflow: need f on {lo}..={hi}")]
    WindowUnderflow { lo: i64, hi: i64 },
    #[error("range: N = {n} outside {lo}..={hi}")]
    Range { n: i64, lo: i64, hi: i64 },
}

impl OracleError {
    pub fn reason(&self) -> &'static str {
        match self {
            OracleError::Spec(e) => e.reason(),
            OracleError::IterationCap { .. } => "iteration-cap",
            OracleError::WindowUnderflow { .. } => "window-underflow",
            OracleError::Range { .. } => "range",
        }
    }
}

impl From<ArithError> for OracleError {
    fn from(e: ArithError) -> OracleError {
        OracleError::Spec(ValidateError::Arith(e))
    }
}

/// `S_j = p S_{j−1} − q S_{j−2}`, filled lazily outward from `S_0, S_1`.
struct Table {
    p: Rat,
    q: Rat,
    lo: i64,
    vals: VecDeque<Rat>,
}

impl Table {
    fn new(spec: &SumSpec, seq: SeqKind) -> Table {
        let params = &spec.params;
        let (s0, s1) = seq.seeds(params.a(), params.b(), params.p());
        Table {
            p: params.p().clone(),
            q: params.q().clone(),
            lo: 0,
            vals: VecDeque::from([s0, s1]),
        }
    }

    fn at(&mut self, i: i64) -> Rat {
        while i >= self.lo + self.vals.len() as i64 {
            let n = self.vals.len();
            let next = &self.p * &self.vals[n - 1] - &self.q * &self.vals[n - 2];
            self.vals.push_back(next);
        }
        while i < self.lo {
            let prev = (&self.p * &self.vals[0] - &self.vals[1])
                .checked_div(&self.q)
                .expect("q is nonzero");
            self.vals.push_front(prev);
            self.lo -= 1;
        }
        self.vals[(i - self.lo) as usize].clone()
    }
}

fn seq_char(seq: SeqKind) -> char {
    match seq {
        SeqKind::W => 'w',
        SeqKind::U => 'u',
        SeqKind::V => 'v',
    }
}

/// A fraction that is never reduced, with `den > 0`. The oracle only adds
/// and compares terms, and reducing each one costs a gcd.
#[derive(Clone, Debug)]
struct Frac {
    num: BigInt,
    den: BigInt,
}

impl Frac {
    fn new(num: BigInt, den: BigInt) -> Frac {
        if den.is_negative() {
            Frac {
                num: -num,
                den: -den,
            }
        } else {
            Frac { num, den }
        }
    }

    fn zero() -> Frac {
        Frac::new(BigInt::zero(), BigInt::one())
    }

    fn abs(&self) -> Frac {
        Frac::new(self.num.abs(), self.den.clone())
    }

    fn add(&mut self, t: &Frac) {
        self.num = &self.num * &t.den + &t.num * &self.den;
        self.den *= &t.den;
    }

    /// `self <= a·b`.
    fn le_prod(&self, a: &Frac, b: &Frac) -> bool {
        &self.num * &a.den * &b.den <= &a.num * &b.num * &self.den
    }

    fn to_rat(&self) -> Rat {
        Rat::new(self.num.clone(), self.den.clone()).expect("positive denominator")
    }
}

/// The `i`-th left-hand-side term of the spec.
fn lhs_term(spec: &SumSpec, table: &mut Table, i: i64) -> Result<Frac, OracleError> {
    let shape = spec.shape();
    let (x, y) = (shape.x(i), shape.y(i));
    let (wx, wy) = (table.at(x), table.at(y));
    if wx.is_zero() || wy.is_zero() {
        let index = if wx.is_zero() { x } else { y };
        return Err(ValidateError::ZeroDenominatorAt {
            seq: seq_char(shape.seq),
            index,
        }
        .into());
    }
    let w = spec.params.q().pow(shape.weight_exp(i))?;
    let mut num = w.numer() * wx.denom() * wy.denom();
    if shape.sign < 0 && i % 2 != 0 {
        num = -num;
    }
    Ok(Frac::new(num, w.denom() * wx.numer() * wy.numer()))
}

/// Exact term-by-term sum of a finite family's left side.
pub fn direct_finite(spec: &SumSpec) -> Result<Rat, OracleError> {
    if spec.family.is_infinite() {
        return Err(
            ValidateError::BadParameter(format!("{} is an infinite family", spec.family)).into(),
        );
    }
    structural(spec, false)?;
    let shape = spec.shape();
    let mut table = Table::new(spec, shape.seq);
    let mut acc = Frac::zero();
    for i in 1..=shape.count.unwrap_or(0) {
        acc.add(&lhs_term(spec, &mut table, i)?);
    }
    Ok(acc.to_rat())
}

/// Partial sum of an infinite family with a certified bound on the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub partial: Rat,
    /// `|true value − partial| <= tail_bound`.
    pub tail_bound: Rat,
    pub terms_used: usize,
}

impl Bracket {
    /// Whether `value` lies within the bracket, decided exactly.
    pub fn contains(&self, value: &QF) -> Result<bool, ArithError> {
        let diff = value.add_rat(&-&self.partial).abs()?;
        let bound = QF::from_rat(self.tail_bound.clone(), value.disc())?;
        Ok(diff.cmp_real(&bound)? != std::cmp::Ordering::Greater)
    }
}

/// Sums terms until the certified tail bound drops to `tol`.
///
/// With `ρ = |β/α|`, `ε_x = |B/A| ρ^x` and index step `d`, every later term
/// ratio is at most `ρ^d ((1 + ε_x)/(1 − ε_x ρ^d))²`, where `x` is the
/// smaller index of the current denominator. All three quantities are
/// replaced by rational upper bounds.
pub fn direct_infinite(spec: &SumSpec, tol: &Rat) -> Result<Bracket, OracleError> {
    if spec.family.is_finite() {
        return Err(
            ValidateError::BadParameter(format!("{} is a finite family", spec.family)).into(),
        );
    }
    if !tol.is_positive() {
        return Err(
            ValidateError::BadParameter(format!("tolerance must be positive, got {tol}")).into(),
        );
    }
    structural(spec, false)?;
    let params = &spec.params;
    if !params.disc().is_positive() || !params.p().is_positive() {
        return Err(ValidateError::DivergentSpec(
            "infinite sums need a positive discriminant and p > 0".into(),
        )
        .into());
    }
    if params.e_w().is_zero() {
        return Err(ValidateError::EwZero.into());
    }
    // bounds are kept as integers over 10^BOUND_DIGITS, rounded up
    let scale = num_traits::pow(BigInt::from(10u32), BOUND_DIGITS as usize);
    let fixed = |r: Rat| ceil_div(r.numer() * &scale, r.denom());
    let mul = |a: &BigInt, b: &BigInt| ceil_div(a * b, &scale);
    let rho = fixed(
        params
            .beta()
            .try_div(params.alpha())?
            .abs()?
            .upper_rat(BOUND_DIGITS)?,
    );
    let ba = fixed(
        params
            .big_b()
            .try_div(params.big_a())?
            .abs()?
            .upper_rat(BOUND_DIGITS)?,
    );
    let shape = spec.shape();
    let pow = |e: u64| {
        let (mut acc, mut sq, mut e) = (scale.clone(), rho.clone(), e);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = mul(&sq, &sq);
            }
        }
        acc
    };
    let rho_d = pow(shape.step as u64);
    // r̄ for the ratio t_{j+1}/t_j with both denominators at or beyond term i.
    // ε̄ only shrinks with i, so a bound taken at an earlier i stays valid;
    // it is refreshed at powers of two.
    let ratio_bound = |i: i64| -> Option<BigInt> {
        let x = u64::try_from(shape.x(i)).ok()?;
        let eps = mul(&ba, &pow(x));
        let shrink = &scale - mul(&eps, &rho_d);
        if !shrink.is_positive() {
            return None;
        }
        let g = ceil_div((&scale + &eps) * &scale, &shrink);
        let r = mul(&rho_d, &mul(&g, &g));
        (r < scale).then_some(r)
    };

    let mut table = Table::new(spec, shape.seq);
    let mut partial = Frac::zero();
    let mut prev: Option<Frac> = None;
    // (r̄, tol·(1 − r̄)/r̄): the tail after t is at most tol once t <= the latter
    let mut bound: Option<(Frac, Frac)> = None;
    let one = Frac::new(BigInt::one(), BigInt::one());
    let tail_of =
        |t: &Frac, r: &Frac| Frac::new(&t.num * &r.num, &t.den * (&r.den - &r.num)).to_rat();
    for i in 1..=MAX_TERMS as i64 {
        let term = lhs_term(spec, &mut table, i)?;
        let t = term.abs();
        partial.add(&term);
        if i >= 2 && (i as u64 - 1).is_power_of_two() {
            if let Some(r) = ratio_bound(i - 1) {
                let thr = Frac::new(tol.numer() * (&scale - &r), tol.denom() * &r);
                bound = Some((Frac::new(r, scale.clone()), thr));
            }
        }
        if let (Some(before), Some((r, thr))) = (&prev, &bound) {
            if t.le_prod(r, before) && t.le_prod(&one, thr) {
                return Ok(Bracket {
                    partial: partial.to_rat(),
                    tail_bound: tail_of(&t, r),
                    terms_used: i as usize,
                });
            }
        }
        prev = Some(t);
    }
    let achieved = match (&prev, &bound) {
        (Some(t), Some((r, _))) => format!("{:e}", tail_of(t, r).to_f64().unwrap_or(f64::NAN)),
        _ => "none".to_string(),
    };
    Err(OracleError::IterationCap {
        terms: MAX_TERMS,
        achieved,
    })
}

fn ceil_div(n: BigInt, d: &BigInt) -> BigInt {
    -(-n).div_floor(d)
}

/// Values of `f` on the consecutive integers `start, start + 1, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub start: i64,
    pub values: Vec<Rat>,
}

impl Window {
    fn get(&self, i: i64) -> Option<&Rat> {
        usize::try_from(i - self.start)
            .ok()
            .and_then(|j| self.values.get(j))
    }
}

/// Left minus right side of
/// `Σ_{i=1}^{N} (f(i+t) − f(i)) = Σ_{i=1}^{t} (f(i+N) − f(i))`, or with
/// `alternating`, of
/// `Σ_{i=1}^{2N} (−1)ᶦ (f(i+2t) − f(i)) = Σ_{i=1}^{2t} (−1)ᶦ (f(i+2N) − f(i))`.
pub fn telescope_check(
    f: &Window,
    big_n: i64,
    t: i64,
    alternating: bool,
) -> Result<Rat, OracleError> {
    if big_n < 0 || t < 0 {
        return Err(ValidateError::BadParameter(format!(
            "N and t must be >= 0, got N={big_n}, t={t}"
        ))
        .into());
    }
    let (n, t, s) = if alternating {
        (2 * big_n, 2 * t, -1)
    } else {
        (big_n, t, 1)
    };
    let hi = (n + t).max(1);
    if f.get(1).is_none() || f.get(hi).is_none() {
        return Err(OracleError::WindowUnderflow { lo: 1, hi });
    }
    let at = |i: i64| f.get(i).expect("window checked").clone();
    let sgn = |i: i64| {
        if s < 0 && i % 2 != 0 {
            Rat::from(-1)
        } else {
            Rat::one()
        }
    };
    let side = |count: i64, shift: i64| -> Rat {
        (1..=count).map(|i| sgn(i) * (at(i + shift) - at(i))).sum()
    };
    Ok(side(n, t) - side(t, n))
}

/// `Σ_{i=0}^{N} 1/F_{2^i}`, term by term.
pub fn good_direct(big_n: i64) -> Result<Rat, OracleError> {
    if !(1..=GOOD_DIRECT_MAX).contains(&big_n) {
        return Err(OracleError::Range {
            n: big_n,
            lo: 1,
            hi: GOOD_DIRECT_MAX,
        });
    }
    // (F_j, F_{j+1}) at j = 2^i, doubled each step
    let (mut f, mut g) = (BigInt::one(), BigInt::one());
    let mut acc = Rat::zero();
    for i in 0..=big_n {
        if i > 0 {
            let f2 = &f * (&g * 2 - &f);
            let g2 = &g * &g + &f * &f;
            f = f2;
            g = g2;
        }
        acc = acc + Rat::new(1, f.clone())?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{eval_finite_closed, eval_infinite_closed, FamilyId};
    use crate::horadam::HoradamParams;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn finite_examples() {
        let fib = HoradamParams::fibonacci();
        let s = SumSpec::over(&fib, FamilyId::T1Fin, 1, 1)
            .with_n(1)
            .with_terms(2);
        assert_eq!(direct_finite(&s).unwrap(), r("1/6"));
        let s = SumSpec::over(&HoradamParams::lucas(), FamilyId::T2Fin, 1, 1).with_terms(1);
        assert_eq!(direct_finite(&s).unwrap(), r("1/6"));
        let s = SumSpec::over(&fib, FamilyId::T9Fin, 2, 3)
            .with_n(1)
            .with_terms(0);
        assert!(direct_finite(&s).unwrap().is_zero());
    }

    #[test]
    fn finite_zero_denominator() {
        let s = SumSpec::over(&HoradamParams::fibonacci(), FamilyId::T2Fin, 1, 1).with_terms(2);
        let e = direct_finite(&s).unwrap_err();
        assert_eq!(
            e,
            OracleError::Spec(ValidateError::ZeroDenominatorAt { seq: 'w', index: 0 })
        );
    }

    #[test]
    fn table_runs_backwards() {
        let pell = HoradamParams::pell();
        let s = SumSpec::over(&pell, FamilyId::T1Fin, 1, 1);
        let mut t = Table::new(&s, SeqKind::W);
        for i in -12..=12 {
            assert_eq!(t.at(i), pell.term(i), "P_{i}");
        }
    }

    #[test]
    fn infinite_brackets_closed() {
        let fib = HoradamParams::fibonacci();
        let tol = r("1e-12");
        let s = SumSpec::over(&fib, FamilyId::C2Inf, 1, 1).with_n(1);
        let b = direct_infinite(&s, &tol).unwrap();
        assert!(b.tail_bound <= tol);
        assert!(b
            .contains(&eval_infinite_closed(&s).unwrap().exact)
            .unwrap());

        let s = SumSpec::over(&HoradamParams::lucas(), FamilyId::C9Inf, 1, 1).with_n(1);
        let b = direct_infinite(&s, &r("1e-20")).unwrap();
        assert!(b
            .contains(&eval_infinite_closed(&s).unwrap().exact)
            .unwrap());
    }

    #[test]
    fn infinite_rejects_bad_specs() {
        let s = SumSpec::over(&HoradamParams::fibonacci(), FamilyId::C2Inf, 0, 1).with_n(1);
        assert_eq!(
            direct_infinite(&s, &r("1e-5")).unwrap_err().reason(),
            "divergent-spec"
        );
        let s = SumSpec::over(&HoradamParams::fibonacci(), FamilyId::T1Fin, 1, 1).with_terms(3);
        assert_eq!(
            direct_infinite(&s, &r("1e-5")).unwrap_err().reason(),
            "bad-parameter"
        );
    }

    #[test]
    fn a_wrong_value_falls_outside() {
        let s = SumSpec::over(&HoradamParams::lucas(), FamilyId::C3Inf, 1, 2);
        let b = direct_infinite(&s, &r("1e-30")).unwrap();
        let v = eval_infinite_closed(&s).unwrap().exact;
        assert!(b.contains(&v).unwrap());
        assert!(!b.contains(&v.add_rat(&r("1e-25"))).unwrap());
    }

    #[test]
    fn telescoping() {
        let squares = Window {
            start: 0,
            values: (0..20).map(|i| Rat::from(i * i)).collect(),
        };
        assert!(telescope_check(&squares, 5, 3, false).unwrap().is_zero());
        assert!(telescope_check(&squares, 4, 2, true).unwrap().is_zero());
        let recips = Window {
            start: 1,
            values: (1..=7).map(|i| Rat::new(1, i).unwrap()).collect(),
        };
        assert!(telescope_check(&recips, 6, 1, false).unwrap().is_zero());
        assert_eq!(
            telescope_check(&recips, 6, 2, false).unwrap_err().reason(),
            "window-underflow"
        );
    }

    #[test]
    fn good_sums() {
        assert_eq!(good_direct(1).unwrap(), r("2"));
        assert_eq!(good_direct(2).unwrap(), r("7/3"));
        assert_eq!(good_direct(3).unwrap(), r("50/21"));
        assert!(good_direct(0).is_err());
        assert!(good_direct(21).is_err());
    }

    #[test]
    fn closed_matches_direct_on_a_sample() {
        let params = HoradamParams::new(r("1"), r("3"), r("2"), r("-1")).unwrap();
        for f in FamilyId::ALL.into_iter().filter(|f| f.is_finite()) {
            let s = SumSpec::over(&params, f, 1, 2).with_n(2).with_terms(5);
            assert_eq!(
                eval_finite_closed(&s).unwrap().exact.as_rat().unwrap(),
                &direct_finite(&s).unwrap(),
                "{s}"
            );
        }
    }
}
