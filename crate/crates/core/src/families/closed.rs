//! Closed forms of every family.
//!
//! Finite sums reduce to `2k` (or `k`) boundary quotients, so the cost does
//! not grow with `N` beyond the `log N` of each term. Infinite sums keep the
//! lower boundary and replace the upper one by its limit, a power of `α`.

use std::collections::HashMap;

use super::{validate, FamilyId, SumSpec, SumValue, ValidSpec, ValidateError};
use crate::exact::{Rat, QF};
use crate::horadam::SeqKind;

/// Memoised terms of `w`, `u` and `v`; closed forms revisit indices a lot.
struct Terms<'a> {
    spec: &'a SumSpec,
    cache: HashMap<(SeqKind, i64), Rat>,
}

impl<'a> Terms<'a> {
    fn new(valid: &'a ValidSpec) -> Terms<'a> {
        let cache = valid
            .screened()
            .iter()
            .map(|(r, v)| ((r.seq, r.index), v.clone()))
            .collect();
        Terms {
            spec: valid.spec(),
            cache,
        }
    }

    fn get(&mut self, seq: SeqKind, i: i64) -> Rat {
        let params = &self.spec.params;
        self.cache
            .entry((seq, i))
            .or_insert_with(|| match seq {
                SeqKind::W => params.term(i),
                SeqKind::U => params.u(i),
                SeqKind::V => params.v(i),
            })
            .clone()
    }

    fn u(&mut self, i: i64) -> Rat {
        self.get(SeqKind::U, i)
    }

    fn ratio(
        &mut self,
        (sn, n): (SeqKind, i64),
        (sd, d): (SeqKind, i64),
    ) -> Result<Rat, ValidateError> {
        let num = self.get(sn, n);
        Ok(num.checked_div(&self.get(sd, d))?)
    }

    fn w_ratio(&mut self, n: i64, d: i64) -> Result<Rat, ValidateError> {
        self.ratio((SeqKind::W, n), (SeqKind::W, d))
    }

    fn q_pow(&self, e: i64) -> Result<Rat, ValidateError> {
        Ok(self.spec.params.q().pow(e)?)
    }
}

fn alt(s: i8, j: i64) -> Rat {
    if s < 0 && j % 2 != 0 {
        Rat::from(-1)
    } else {
        Rat::one()
    }
}

fn value(v: &ValidSpec, exact: QF) -> SumValue {
    SumValue {
        exact,
        family: v.spec().family,
        spec: v.spec().record(),
    }
}

fn rational(v: &ValidSpec, r: Rat) -> Result<SumValue, ValidateError> {
    let disc = v.spec().params.disc();
    Ok(value(v, QF::from_rat(r, disc)?))
}

fn need_finite(spec: &SumSpec) -> Result<i64, ValidateError> {
    if spec.family.is_infinite() {
        return Err(ValidateError::BadParameter(format!(
            "{} is an infinite family",
            spec.family
        )));
    }
    Ok(spec.big_n.unwrap_or(0))
}

impl ValidSpec {
    /// The telescoped closed form of a finite family.
    pub fn finite_closed(&self) -> Result<SumValue, ValidateError> {
        let spec = self.spec();
        let big_n = need_finite(spec)?;
        if spec.family == FamilyId::T1Eq || spec.family == FamilyId::T2Eq {
            return self.finite_equivalent();
        }
        let (m, k, n, s) = (spec.m, spec.k, spec.n, spec.sign);
        let mut t = Terms::new(self);
        let e = spec.params.e_w().clone();
        let u2km = t.u(2 * k * m);
        let mut acc = Rat::zero();
        use FamilyId::*;
        let pref = match spec.family {
            T1Fin | T8Signed => {
                let (count, span) = if spec.family == T8Signed {
                    (2 * k, 2 * big_n)
                } else {
                    (2 * k, big_n)
                };
                for j in 1..=count {
                    let lo = m * (j - k);
                    let hi = m * (j + span - k);
                    acc = acc + alt(s, j) * (t.w_ratio(lo, lo + n)? - t.w_ratio(hi, hi + n)?);
                }
                &e * t.u(n) * &u2km
            }
            C1Fin => {
                for j in 1..=2 * k {
                    acc = acc + t.w_ratio(m * (j - k), m * j)?
                        - t.w_ratio(m * (j + big_n - k), m * (j + big_n))?;
                }
                &e * t.u(m * k) * &u2km
            }
            T2Fin => {
                for j in 1..=2 * k {
                    let hi = m * (j + big_n - k);
                    let lo = m * (j - k);
                    acc = acc + t.w_ratio(hi + 1, hi)? - t.w_ratio(lo + 1, lo)?;
                }
                &e * &u2km
            }
            T3VFin => {
                for j in 1..=2 * k {
                    let hi = m * (j + big_n - k);
                    let lo = m * (j - k);
                    acc = acc + t.ratio((SeqKind::U, hi), (SeqKind::V, hi))?
                        - t.ratio((SeqKind::U, lo), (SeqKind::V, lo))?;
                }
                Rat::from(2) * &u2km
            }
            T3UFin => {
                for j in 1..=2 * k {
                    let lo = m * j;
                    let hi = m * (j + big_n);
                    acc = acc + t.ratio((SeqKind::V, lo), (SeqKind::U, lo))?
                        - t.ratio((SeqKind::V, hi), (SeqKind::U, hi))?;
                }
                Rat::from(2) * &u2km
            }
            T5Fin => {
                for j in 1..=2 * k {
                    let hi = m * (j + big_n);
                    let lo = m * j;
                    acc = acc + t.w_ratio(hi + 1, hi)? - t.w_ratio(lo + 1, lo)?;
                }
                &e * &u2km
            }
            T9Fin => {
                for j in 1..=k {
                    let lo = m * (2 * j - k);
                    let hi = m * (2 * (j + big_n) - k);
                    acc = acc + alt(s, j) * (t.w_ratio(lo, lo + n)? - t.w_ratio(hi, hi + n)?);
                }
                &e * t.u(n) * &u2km
            }
            T11Fin => {
                for j in 1..=k {
                    let lo = m * (2 * j - k);
                    let hi = m * (2 * (j + big_n) - k);
                    acc = acc + alt(s, j) * (t.w_ratio(hi + 1, hi)? - t.w_ratio(lo + 1, lo)?);
                }
                &e * &u2km
            }
            T1Eq | T2Eq | C2Inf | C3Inf | T5Inf | C8Inf | C9Inf | C9InfAlt | T11Inf | T11InfAlt => {
                unreachable!("handled above")
            }
        };
        rational(self, acc.checked_div(&pref)?)
    }

    /// The equivalent form with the `u_{mN}` (or `u_{2mN}`) factor, a sum of
    /// `2k` (or `k`) reciprocal products instead of quotient differences.
    pub fn finite_equivalent(&self) -> Result<SumValue, ValidateError> {
        let spec = self.spec();
        let big_n = need_finite(spec)?;
        let (m, k, n, s) = (spec.m, spec.k, spec.n, spec.sign);
        let mut t = Terms::new(self);
        let u2km = t.u(2 * k * m);
        let mut acc = Rat::zero();
        fn prod(
            t: &mut Terms,
            x: (SeqKind, i64),
            y: (SeqKind, i64),
            weight: Rat,
        ) -> Result<Rat, ValidateError> {
            let d = t.get(x.0, x.1) * t.get(y.0, y.1);
            Ok(weight.checked_div(&d)?)
        }
        let w = |i| (SeqKind::W, i);
        use FamilyId::*;
        let (lead, shift) = match spec.family {
            T1Fin | T1Eq => {
                for j in 1..=2 * k {
                    let weight = t.q_pow(m * j)?;
                    acc = acc
                        + prod(
                            &mut t,
                            w(m * (j - k) + n),
                            w(m * (j + big_n - k) + n),
                            weight,
                        )?;
                }
                (t.u(m * big_n), t.q_pow(-m * k)?)
            }
            C1Fin => {
                for j in 1..=2 * k {
                    let weight = t.q_pow(m * j)?;
                    acc = acc + prod(&mut t, w(m * j), w(m * (j + big_n)), weight)?;
                }
                (t.u(m * big_n), t.q_pow(-m * k)?)
            }
            T2Fin | T2Eq => {
                for j in 1..=2 * k {
                    let weight = t.q_pow(m * j)?;
                    acc = acc + prod(&mut t, w(m * (j - k)), w(m * (j + big_n - k)), weight)?;
                }
                (t.u(m * big_n), t.q_pow(-m * k)?)
            }
            T3VFin => {
                for j in 1..=2 * k {
                    let x = (SeqKind::V, m * (j - k));
                    let y = (SeqKind::V, m * (j + big_n - k));
                    let weight = t.q_pow(m * (j - k))?;
                    acc = acc + prod(&mut t, x, y, weight)?;
                }
                (t.u(m * big_n), Rat::one())
            }
            T3UFin => {
                for j in 1..=2 * k {
                    let x = (SeqKind::U, m * j);
                    let y = (SeqKind::U, m * (j + big_n));
                    let weight = t.q_pow(m * j)?;
                    acc = acc + prod(&mut t, x, y, weight)?;
                }
                (t.u(m * big_n), Rat::one())
            }
            T5Fin => {
                for j in 1..=2 * k {
                    let weight = t.q_pow(m * j)?;
                    acc = acc + prod(&mut t, w(m * j), w(m * (j + big_n)), weight)?;
                }
                (t.u(m * big_n), Rat::one())
            }
            T8Signed => {
                for j in 1..=2 * k {
                    let weight = alt(s, j) * t.q_pow(m * j)?;
                    acc = acc
                        + prod(
                            &mut t,
                            w(m * (j - k) + n),
                            w(m * (j + 2 * big_n - k) + n),
                            weight,
                        )?;
                }
                (t.u(2 * m * big_n), t.q_pow(-m * k)?)
            }
            T9Fin => {
                for j in 1..=k {
                    let weight = alt(s, j) * t.q_pow(2 * m * j)?;
                    acc = acc
                        + prod(
                            &mut t,
                            w(m * (2 * j - k) + n),
                            w(m * (2 * (j + big_n) - k) + n),
                            weight,
                        )?;
                }
                (t.u(2 * m * big_n), t.q_pow(-m * k)?)
            }
            T11Fin => {
                for j in 1..=k {
                    let weight = alt(s, j) * t.q_pow(m * (2 * j - k))?;
                    acc = acc
                        + prod(
                            &mut t,
                            w(m * (2 * j - k)),
                            w(m * (2 * (j + big_n) - k)),
                            weight,
                        )?;
                }
                (t.u(2 * m * big_n), Rat::one())
            }
            C2Inf | C3Inf | T5Inf | C8Inf | C9Inf | C9InfAlt | T11Inf | T11InfAlt => {
                unreachable!("finite only")
            }
        };
        rational(self, (lead * shift * acc).checked_div(&u2km)?)
    }

    /// The exact limit of an infinite family, in `Q(√Δ)`.
    pub fn infinite_closed(&self) -> Result<SumValue, ValidateError> {
        let spec = self.spec();
        if spec.family.is_finite() {
            return Err(ValidateError::BadParameter(format!(
                "{} is a finite family",
                spec.family
            )));
        }
        let (m, k, n) = (spec.m, spec.k, spec.n);
        let params = &spec.params;
        let disc = params.disc();
        let mut t = Terms::new(self);
        let e = params.e_w().clone();
        let u2km = t.u(2 * k * m);
        let alpha = params.alpha().clone();
        let mut acc = Rat::zero();
        use FamilyId::*;
        let (limit, pref) = match spec.family {
            C2Inf => {
                for j in 1..=2 * k {
                    let lo = m * (j - k);
                    acc = acc + t.w_ratio(lo, lo + n)?;
                }
                (
                    alpha.pow(-n)?.mul_rat(&Rat::from(-2 * k)),
                    &e * t.u(n) * &u2km,
                )
            }
            C8Inf => {
                for j in 1..=2 * k {
                    let lo = m * (j - k);
                    acc = acc + alt(-1, j) * t.w_ratio(lo, lo + n)?;
                }
                (QF::zero(disc)?, &e * t.u(n) * &u2km)
            }
            C9Inf => {
                for j in 1..=k {
                    let lo = m * (2 * j - k);
                    acc = acc + t.w_ratio(lo, lo + n)?;
                }
                (alpha.pow(-n)?.mul_rat(&Rat::from(-k)), &e * t.u(n) * &u2km)
            }
            C9InfAlt => {
                for j in 1..=k {
                    let lo = m * (2 * j - k);
                    acc = acc + alt(-1, j) * t.w_ratio(lo, lo + n)?;
                }
                (QF::zero(disc)?, &e * t.u(n) * &u2km)
            }
            C3Inf => {
                for j in 1..=2 * k {
                    let lo = m * (j - k);
                    acc = acc - t.w_ratio(lo + 1, lo)?;
                }
                (alpha.mul_rat(&Rat::from(2 * k)), &e * &u2km)
            }
            T5Inf => {
                for j in 1..=2 * k {
                    acc = acc - t.w_ratio(m * j + 1, m * j)?;
                }
                (alpha.mul_rat(&Rat::from(2 * k)), &e * &u2km)
            }
            T11Inf => {
                for j in 1..=k {
                    let lo = m * (2 * j - k);
                    acc = acc - t.w_ratio(lo + 1, lo)?;
                }
                (alpha.mul_rat(&Rat::from(k)), &e * &u2km)
            }
            T11InfAlt => {
                for j in 1..=k {
                    let lo = m * (2 * j - k);
                    acc = acc - alt(-1, j) * t.w_ratio(lo + 1, lo)?;
                }
                (QF::zero(disc)?, &e * &u2km)
            }
            T1Fin | T1Eq | C1Fin | T2Fin | T2Eq | T3VFin | T3UFin | T5Fin | T8Signed | T9Fin
            | T11Fin => {
                unreachable!("infinite only")
            }
        };
        let total = limit.add_rat(&acc).div_rat(&pref)?;
        Ok(value(self, total))
    }
}

/// Validates, then evaluates the closed form of a finite family.
pub fn eval_finite_closed(spec: &SumSpec) -> Result<SumValue, ValidateError> {
    validate(spec)?.finite_closed()
}

/// Validates, then evaluates the `u_{mN}` form of a finite family.
pub fn eval_finite_equivalent(spec: &SumSpec) -> Result<SumValue, ValidateError> {
    validate(spec)?.finite_equivalent()
}

/// Validates, then evaluates the limit of an infinite family.
pub fn eval_infinite_closed(spec: &SumSpec) -> Result<SumValue, ValidateError> {
    validate(spec)?.infinite_closed()
}
