//! Printed Fibonacci and Lucas specializations, each compared with the
//! general evaluator (or, where none applies, with the oracle).
//!
//! Case names start with a fixed tag (`Fib1`, `Luc2`, `lucas-n0`,
//! `series-3`, `good`, `miller`, …) so callers can select groups.

use super::{failure, Outcome, VerifyReport};
use crate::exact::{Rat, QF};
use crate::families::{
    classic_good, classic_miller, eval_finite_closed, eval_infinite_closed, FamilyId, SpecRecord,
    SumSpec,
};
use crate::horadam::{lucas_u, HoradamParams};
use crate::oracle::{direct_infinite, good_direct, Bracket};

/// Terms of `Σ 1/F_{2^i}` are at most the square of the previous one.
const GOOD_PARTIAL_N: i64 = 12;

fn five() -> Rat {
    Rat::from(5)
}

fn qf(r: Rat) -> QF {
    QF::from_rat(r, &five()).expect("5 is nonzero")
}

fn f(n: i64) -> Rat {
    lucas_u(&Rat::one(), &Rat::from(-1), n).expect("valid")
}

fn l(n: i64) -> Rat {
    HoradamParams::lucas().term(n)
}

fn div(a: Rat, b: Rat) -> Rat {
    a.checked_div(&b)
        .expect("printed forms have nonzero denominators here")
}

/// `Φ^{−n}`.
fn phi_inv(n: i64) -> QF {
    HoradamParams::fibonacci()
        .alpha()
        .pow(-n)
        .expect("Φ is nonzero")
}

fn half() -> Rat {
    Rat::new(1, 2).expect("nonzero")
}

#[derive(Default)]
struct Fixtures {
    report: VerifyReport,
}

impl Fixtures {
    fn equal(&mut self, case: String, spec: Option<SpecRecord>, general: &QF, printed: &QF) {
        let outcome = if general == printed {
            Outcome::Pass
        } else {
            failure(case, spec, "general-vs-printed", general, printed)
        };
        self.report.push(outcome);
    }

    fn evaluated(&mut self, case: String, spec: &SumSpec, printed: &QF) {
        let general = if spec.family.is_finite() {
            eval_finite_closed(spec)
        } else {
            eval_infinite_closed(spec)
        };
        match general {
            Ok(v) => self.equal(case, Some(spec.record()), &v.exact, printed),
            Err(e) => self.report.push(super::error_failure(
                case,
                Some(spec.record()),
                "general",
                e.to_string(),
            )),
        }
    }

    /// `printed` must lie within `scale · bracket`.
    fn bracketed(
        &mut self,
        case: String,
        spec: Option<SpecRecord>,
        bracket: &Bracket,
        scale: i64,
        printed: &QF,
    ) {
        let scaled = Bracket {
            partial: &bracket.partial * Rat::from(scale),
            tail_bound: bracket.tail_bound.clone(),
            terms_used: bracket.terms_used,
        };
        let outcome = match scaled.contains(printed) {
            Ok(true) => Outcome::Pass,
            Ok(false) => {
                let mut out = failure(
                    case,
                    spec,
                    "printed-within-tail-bound",
                    printed,
                    &qf(scaled.partial.clone()),
                );
                if let Outcome::Fail(fl) = &mut out {
                    fl.rhs = format!("{} (tail bound {})", fl.rhs, scaled.tail_bound);
                }
                out
            }
            Err(e) => super::error_failure(case, spec, "printed-within-tail-bound", e.to_string()),
        };
        self.report.push(outcome);
    }
}

/// The basic finite sum and its limit with `k = 1` over `F` and `L`.
fn fib_luc(fx: &mut Fixtures) {
    let fib = HoradamParams::fibonacci();
    let luc = HoradamParams::lucas();
    for m in 1..=3 {
        for n in 1..=3 {
            for big_n in 1..=5 {
                let s = SumSpec::over(&fib, FamilyId::T1Fin, m, 1)
                    .with_n(n)
                    .with_terms(big_n);
                let printed = div(
                    div(f(m * (big_n + 1)), f(m * (big_n + 1) + n))
                        + div(f(m * big_n), f(m * big_n + n))
                        - div(f(m), f(m + n)),
                    f(n) * f(2 * m),
                );
                fx.evaluated(format!("Fib1 m={m} n={n} N={big_n}"), &s, &qf(printed));

                let s = SumSpec::over(&luc, FamilyId::T1Fin, m, 1)
                    .with_n(n)
                    .with_terms(big_n);
                let printed = div(
                    div(Rat::from(2), l(n)) + div(l(m), l(m + n))
                        - div(l(m * big_n), l(m * big_n + n))
                        - div(l(m * (big_n + 1)), l(m * (big_n + 1) + n)),
                    five() * f(n) * f(2 * m),
                );
                fx.evaluated(format!("Luc1 m={m} n={n} N={big_n}"), &s, &qf(printed));
            }
            let s = SumSpec::over(&fib, FamilyId::C2Inf, m, 1).with_n(n);
            let printed = phi_inv(n)
                .mul_rat(&Rat::from(2))
                .add_rat(&-div(f(m), f(m + n)))
                .div_rat(&(f(n) * f(2 * m)))
                .expect("nonzero");
            fx.evaluated(format!("Fib2 m={m} n={n}"), &s, &printed);

            let s = SumSpec::over(&luc, FamilyId::C2Inf, m, 1).with_n(n);
            let printed = phi_inv(n)
                .mul_rat(&Rat::from(-2))
                .add_rat(&(div(Rat::from(2), l(n)) + div(l(m), l(m + n))))
                .div_rat(&(five() * f(n) * f(2 * m)))
                .expect("nonzero");
            fx.evaluated(format!("Luc2 m={m} n={n}"), &s, &printed);
        }
    }
}

/// The `n = 0`, `k = 1` Lucas sums in both printed forms.
fn lucas_n0(fx: &mut Fixtures) {
    let luc = HoradamParams::lucas();
    for m in 1..=4 {
        for big_n in 1..=5 {
            let s = SumSpec::over(&luc, FamilyId::T2Fin, m, 1).with_terms(big_n);
            let hi = m * (big_n + 1);
            let lo = m * big_n;
            let first = div(
                div(l(hi + 1), l(hi)) + div(l(lo + 1), l(lo)) - div(l(m + 1), l(m)) - half(),
                five() * f(2 * m),
            );
            let second = div(
                div(f(hi), l(hi)) + div(f(lo), l(lo)) - div(f(m), l(m)),
                Rat::from(2) * f(2 * m),
            );
            fx.evaluated(format!("lucas-n0 m={m} N={big_n}"), &s, &qf(first.clone()));
            fx.evaluated(
                format!("lucas-n0-alt m={m} N={big_n}"),
                &s,
                &qf(second.clone()),
            );
            fx.equal(
                format!("lucas-n0-forms m={m} N={big_n}"),
                None,
                &qf(first.clone()),
                &qf(second),
            );
            let v = SumSpec::over(&luc, FamilyId::T3VFin, m, 1).with_terms(big_n);
            fx.evaluated(format!("lucas-n0-v m={m} N={big_n}"), &v, &qf(first));
        }
        let s = SumSpec::over(&luc, FamilyId::C3Inf, m, 1);
        let alpha = HoradamParams::fibonacci().alpha().clone();
        let first = alpha
            .mul_rat(&Rat::from(2))
            .add_rat(&(-div(l(m + 1), l(m)) - half()))
            .div_rat(&(five() * f(2 * m)))
            .expect("nonzero");
        let root5 = QF::sqrt_disc(&five()).expect("nonzero");
        let second = root5
            .mul_rat(&f(2 * m))
            .recip()
            .expect("nonzero")
            .add_rat(&-div(Rat::one(), Rat::from(2) * l(m) * l(m)));
        fx.evaluated(format!("lucas-n0-inf m={m}"), &s, &first);
        fx.evaluated(format!("lucas-n0-inf-alt m={m}"), &s, &second);
        fx.equal(format!("lucas-n0-inf-forms m={m}"), None, &first, &second);
    }
}

fn sign(m: i64) -> i64 {
    if m % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The eight alternating and plain Fibonacci and Lucas series of the (2i − k) family.
/// Odd `k` has no alternating closed form, so items 5 and 7 are checked
/// against the oracle instead.
fn series(fx: &mut Fixtures) {
    let fib = HoradamParams::fibonacci();
    let luc = HoradamParams::lucas();
    let tol: Rat = "1e-40".parse().expect("literal");
    for m in 1..=3 {
        for n in 1..=3 {
            let sm = Rat::from(sign(m));
            let pi = phi_inv(n);

            // 1: (−1)^m C9(m, 1, n) over F
            let s = SumSpec::over(&fib, FamilyId::C9Inf, m, 1).with_n(n);
            let printed = pi
                .add_rat(&-div(f(m), f(m + n)))
                .mul_rat(&div(sm.clone(), f(n) * f(2 * m)));
            scaled_eval(fx, format!("series-1 m={m} n={n}"), &s, sign(m), &printed);

            // 2: C9(m, 2, n) over F
            let s = SumSpec::over(&fib, FamilyId::C9Inf, m, 2).with_n(n);
            let printed = pi
                .mul_rat(&Rat::from(2))
                .add_rat(&-div(f(2 * m), f(2 * m + n)))
                .div_rat(&(f(n) * f(4 * m)))
                .expect("nonzero");
            fx.evaluated(format!("series-2 m={m} n={n}"), &s, &printed);

            // 3: (−1)^m C9(m, 1, n) over L
            let s = SumSpec::over(&luc, FamilyId::C9Inf, m, 1).with_n(n);
            let printed = (-&pi)
                .add_rat(&div(l(m), l(m + n)))
                .mul_rat(&div(sm.clone(), five() * f(n) * f(2 * m)));
            scaled_eval(fx, format!("series-3 m={m} n={n}"), &s, sign(m), &printed);

            // 4: C9(m, 2, n) over L
            let s = SumSpec::over(&luc, FamilyId::C9Inf, m, 2).with_n(n);
            let printed = pi
                .mul_rat(&Rat::from(-2))
                .add_rat(&(div(Rat::from(2), l(n)) + div(l(2 * m), l(2 * m + n))))
                .div_rat(&(five() * f(n) * f(4 * m)))
                .expect("nonzero");
            fx.evaluated(format!("series-4 m={m} n={n}"), &s, &printed);

            // 5: (−1)^m × alternating (m, 1, n) over F, by the oracle
            let s = SumSpec::over(&fib, FamilyId::C9InfAlt, m, 1).with_n(n);
            let printed = qf(div(sm.clone() * f(m), f(n) * f(2 * m) * f(m + n)));
            oracle_bracket(
                fx,
                format!("series-5 m={m} n={n}"),
                &s,
                &tol,
                sign(m),
                &printed,
            );

            // 6: alternating C9(m, 2, n) over F
            let s = SumSpec::over(&fib, FamilyId::C9InfAlt, m, 2).with_n(n);
            let printed = qf(-div(f(2 * m), f(n) * f(4 * m) * f(2 * m + n)));
            fx.evaluated(format!("series-6 m={m} n={n}"), &s, &printed);

            // 7: (−1)^m × alternating (m, 1, n) over L, by the oracle
            let s = SumSpec::over(&luc, FamilyId::C9InfAlt, m, 1).with_n(n);
            let printed = qf(div(-sm.clone() * l(m), five() * f(n) * f(2 * m) * l(m + n)));
            oracle_bracket(
                fx,
                format!("series-7 m={m} n={n}"),
                &s,
                &tol,
                sign(m),
                &printed,
            );

            // 8: alternating C9(m, 2, n) over L
            let s = SumSpec::over(&luc, FamilyId::C9InfAlt, m, 2).with_n(n);
            let printed = qf(div(
                div(l(2 * m), l(2 * m + n)) - div(Rat::from(2), l(n)),
                five() * f(n) * f(4 * m),
            ));
            fx.evaluated(format!("series-8 m={m} n={n}"), &s, &printed);
        }
    }
}

fn scaled_eval(fx: &mut Fixtures, case: String, spec: &SumSpec, scale: i64, printed: &QF) {
    match eval_infinite_closed(spec) {
        Ok(v) => {
            let general = v.exact.mul_rat(&Rat::from(scale));
            fx.equal(case, Some(spec.record()), &general, printed);
        }
        Err(e) => fx.report.push(super::error_failure(
            case,
            Some(spec.record()),
            "general",
            e.to_string(),
        )),
    }
}

fn oracle_bracket(
    fx: &mut Fixtures,
    case: String,
    spec: &SumSpec,
    tol: &Rat,
    scale: i64,
    printed: &QF,
) {
    match direct_infinite(spec, tol) {
        Ok(b) => fx.bracketed(case, Some(spec.record()), &b, scale, printed),
        Err(e) => fx.report.push(super::error_failure(
            case,
            Some(spec.record()),
            "direct",
            e.to_string(),
        )),
    }
}

/// Good's finite sums and Miller's limit.
fn classics(fx: &mut Fixtures) {
    for big_n in 1..=12 {
        let closed = classic_good(big_n).expect("in range");
        let direct = good_direct(big_n).expect("in range");
        fx.equal(format!("good N={big_n}"), None, &qf(closed), &qf(direct));
    }
    // terms after i = N are below t_{N+1}, t_{N+1}², …
    let partial = good_direct(GOOD_PARTIAL_N).expect("in range");
    let next = div(Rat::one(), f(1 << (GOOD_PARTIAL_N + 1)));
    let tail = div(next.clone(), Rat::one() - next);
    let bracket = Bracket {
        partial,
        tail_bound: tail.clone(),
        terms_used: GOOD_PARTIAL_N as usize + 1,
    };
    fx.bracketed(
        format!("miller N={GOOD_PARTIAL_N}"),
        None,
        &bracket,
        1,
        &classic_miller(),
    );
    let tol: Rat = "1e-30".parse().expect("literal");
    let outcome = if tail <= tol {
        Outcome::Pass
    } else {
        failure(
            format!("miller-tail N={GOOD_PARTIAL_N}"),
            None,
            "tail-below-1e-30",
            &qf(tail),
            &qf(tol),
        )
    };
    fx.report.push(outcome);
}

/// Every printed specialization, checked exactly where a closed form
/// applies and against the oracle otherwise.
pub fn run_fixtures() -> VerifyReport {
    let mut fx = Fixtures::default();
    fib_luc(&mut fx);
    lucas_n0(&mut fx);
    series(&mut fx);
    classics(&mut fx);
    fx.report
}
