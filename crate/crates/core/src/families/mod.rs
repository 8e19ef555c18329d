//! The reciprocal-sum families, their specs, and validation.
//!
//! Every family sums terms of the shape
//!
//! ```text
//! sᶦ · q^(c·i + c₀) / (S_{d·i + x₀} · S_{d·i + y₀}),   i = 1, 2, …
//! ```
//!
//! over one of the sequences `w`, `u`, `v` (see [`Shape`]). The closed forms
//! live in [`closed`]; the by-product relations between `u` and `v` in
//! [`relations`]; the two historical Fibonacci results in [`classics`].

pub mod classics;
pub mod closed;
pub mod relations;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exact::{ArithError, Rat, QF};
use crate::horadam::{nonvanishing_horizon, HoradamParams, HorizonError, ParamError, SeqKind};

pub use classics::{classic_good, classic_miller, ClassicError, GOOD_MAX_N};
pub use closed::{eval_finite_closed, eval_finite_equivalent, eval_infinite_closed};
pub use relations::{byproduct_relation_residual, Relation};

/// Largest magnitude accepted for `m`, `k`, `n` and `N`.
pub const MAX_PARAM: i64 = 100_000;

/// Catalog of the sum families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// Σ q^{m(i−k)} / (w_{m(i−k)+n} w_{m(i+k)+n}), i = 1..N.
    T1Fin,
    /// Same sum, through the `u_{mN}` form.
    T1Eq,
    /// The `n = mk` case: Σ q^{m(i−k)} / (w_{mi} w_{m(i+2k)}).
    C1Fin,
    /// Infinite T1 sum.
    C2Inf,
    /// The `n = 0` case: Σ q^{m(i−k)} / (w_{m(i−k)} w_{m(i+k)}).
    T2Fin,
    T2Eq,
    /// Infinite T2 sum.
    C3Inf,
    /// Σ q^{m(i−k)} / (v_{m(i−k)} v_{m(i+k)}).
    T3VFin,
    /// Σ q^{mi} / (u_{mi} u_{m(i+2k)}).
    T3UFin,
    /// Non-singular `n = 0` sum Σ q^{mi} / (w_{mi} w_{m(i+2k)}).
    T5Fin,
    T5Inf,
    /// Σ_{i=1}^{2N} (±1)ᶦ q^{m(i−k)} / (w_{m(i−k)+n} w_{m(i+k)+n}).
    T8Signed,
    /// Infinite alternating T8 sum.
    C8Inf,
    /// Σ (±1)ᶦ q^{m(2i−k)} / (w_{m(2i−k)+n} w_{m(2i+k)+n}).
    T9Fin,
    C9Inf,
    C9InfAlt,
    /// Σ (±1)ᶦ q^{m(2i−k)} / (w_{m(2i−k)} w_{m(2i+k)}).
    T11Fin,
    T11Inf,
    T11InfAlt,
}

impl FamilyId {
    pub const ALL: [FamilyId; 19] = [
        FamilyId::T1Fin,
        FamilyId::T1Eq,
        FamilyId::C1Fin,
        FamilyId::C2Inf,
        FamilyId::T2Fin,
        FamilyId::T2Eq,
        FamilyId::C3Inf,
        FamilyId::T3VFin,
        FamilyId::T3UFin,
        FamilyId::T5Fin,
        FamilyId::T5Inf,
        FamilyId::T8Signed,
        FamilyId::C8Inf,
        FamilyId::T9Fin,
        FamilyId::C9Inf,
        FamilyId::C9InfAlt,
        FamilyId::T11Fin,
        FamilyId::T11Inf,
        FamilyId::T11InfAlt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::T1Fin => "T1_FIN",
            FamilyId::T1Eq => "T1_EQ",
            FamilyId::C1Fin => "C1_FIN",
            FamilyId::C2Inf => "C2_INF",
            FamilyId::T2Fin => "T2_FIN",
            FamilyId::T2Eq => "T2_EQ",
            FamilyId::C3Inf => "C3_INF",
            FamilyId::T3VFin => "T3V_FIN",
            FamilyId::T3UFin => "T3U_FIN",
            FamilyId::T5Fin => "T5_FIN",
            FamilyId::T5Inf => "T5_INF",
            FamilyId::T8Signed => "T8_SIGNED",
            FamilyId::C8Inf => "C8_INF",
            FamilyId::T9Fin => "T9_FIN",
            FamilyId::C9Inf => "C9_INF",
            FamilyId::C9InfAlt => "C9_INF_ALT",
            FamilyId::T11Fin => "T11_FIN",
            FamilyId::T11Inf => "T11_INF",
            FamilyId::T11InfAlt => "T11_INF_ALT",
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(
            self,
            FamilyId::C2Inf
                | FamilyId::C3Inf
                | FamilyId::T5Inf
                | FamilyId::C8Inf
                | FamilyId::C9Inf
                | FamilyId::C9InfAlt
                | FamilyId::T11Inf
                | FamilyId::T11InfAlt
        )
    }

    pub fn is_finite(self) -> bool {
        !self.is_infinite()
    }

    /// Families whose sum depends on the shift `n`.
    pub fn uses_n(self) -> bool {
        matches!(
            self,
            FamilyId::T1Fin
                | FamilyId::T1Eq
                | FamilyId::C2Inf
                | FamilyId::T8Signed
                | FamilyId::C8Inf
                | FamilyId::T9Fin
                | FamilyId::C9Inf
                | FamilyId::C9InfAlt
        )
    }

    /// Families taking the `±1` sign choice.
    pub fn is_signed(self) -> bool {
        matches!(
            self,
            FamilyId::T8Signed | FamilyId::T9Fin | FamilyId::T11Fin
        )
    }

    /// The sign fixed by the family itself, for infinite alternating sums.
    fn fixed_sign(self) -> Option<i8> {
        match self {
            FamilyId::C8Inf | FamilyId::C9InfAlt | FamilyId::T11InfAlt => Some(-1),
            f if f.is_signed() => None,
            _ => Some(1),
        }
    }

    /// Families summed over the Lucas sequences rather than `w`.
    pub fn forced_kind(self) -> Option<SeqKind> {
        match self {
            FamilyId::T3VFin => Some(SeqKind::V),
            FamilyId::T3UFin => Some(SeqKind::U),
            _ => None,
        }
    }

    /// Families whose closed form divides by `e_w`.
    pub fn divides_by_e_w(self) -> bool {
        !matches!(self, FamilyId::T3VFin | FamilyId::T3UFin)
    }

    /// The (2i − k) families, where sign −1 needs even `k` (and even `N`).
    fn is_double_step(self) -> bool {
        matches!(
            self,
            FamilyId::T9Fin
                | FamilyId::C9Inf
                | FamilyId::C9InfAlt
                | FamilyId::T11Fin
                | FamilyId::T11Inf
                | FamilyId::T11InfAlt
        )
    }

    /// Finite family of which this infinite family is the limit, with its sign.
    pub fn finite_counterpart(self) -> Option<(FamilyId, i8)> {
        Some(match self {
            FamilyId::C2Inf => (FamilyId::T1Fin, 1),
            FamilyId::C3Inf => (FamilyId::T2Fin, 1),
            FamilyId::T5Inf => (FamilyId::T5Fin, 1),
            FamilyId::C8Inf => (FamilyId::T8Signed, -1),
            FamilyId::C9Inf => (FamilyId::T9Fin, 1),
            FamilyId::C9InfAlt => (FamilyId::T9Fin, -1),
            FamilyId::T11Inf => (FamilyId::T11Fin, 1),
            FamilyId::T11InfAlt => (FamilyId::T11Fin, -1),
            _ => return None,
        })
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = String;
    fn from_str(s: &str) -> Result<FamilyId, String> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for FamilyId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<FamilyId, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Named validation failures; [`ValidateError::reason`] gives the taxonomy key.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidateError {
    #[error("bad-parameter: {0}")]
    BadParameter(String),
    #[error("sign-parity: sign -1 needs {0}")]
    SignParity(&'static str),
    #[error("divergent-spec: {0}")]
    DivergentSpec(String),
    #[error("e_w-zero: the closed form divides by e_w = 0")]
    EwZero,
    #[error("u_n-zero: u_{index} = 0")]
    UnZero { index: i64 },
    #[error("u_2km-zero: u_{index} = 0")]
    U2kmZero { index: i64 },
    #[error("zero-denominator-at: {seq}_{index} = 0")]
    ZeroDenominatorAt { seq: char, index: i64 },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("arithmetic: {0}")]
    Arith(#[from] ArithError),
}

impl ValidateError {
    pub fn reason(&self) -> &'static str {
        match self {
            ValidateError::BadParameter(_) => "bad-parameter",
            ValidateError::SignParity(_) => "sign-parity",
            ValidateError::DivergentSpec(_) => "divergent-spec",
            ValidateError::EwZero => "e_w-zero",
            ValidateError::UnZero { .. } => "u_n-zero",
            ValidateError::U2kmZero { .. } => "u_2km-zero",
            ValidateError::ZeroDenominatorAt { .. } => "zero-denominator-at",
            ValidateError::Param(p) => p.reason(),
            ValidateError::Arith(_) => "arithmetic",
        }
    }
}

impl From<HorizonError> for ValidateError {
    fn from(e: HorizonError) -> ValidateError {
        match e {
            HorizonError::Precondition(msg) => ValidateError::DivergentSpec(msg.to_string()),
            HorizonError::Arith(a) => ValidateError::Arith(a),
        }
    }
}

fn seq_char(kind: SeqKind) -> char {
    match kind {
        SeqKind::W => 'w',
        SeqKind::U => 'u',
        SeqKind::V => 'v',
    }
}

/// One sum to evaluate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumSpec {
    /// The sequence `w` the family is summed over (Lucas forced for T3U/T3V).
    pub params: HoradamParams,
    pub kind: SeqKind,
    pub family: FamilyId,
    pub m: i64,
    pub k: i64,
    /// Ignored by families that do not use it.
    pub n: i64,
    /// Number of terms; `None` for infinite families.
    pub big_n: Option<i64>,
    /// `+1` or `−1`; only signed families read it.
    pub sign: i8,
}

impl SumSpec {
    /// Builds a spec over `w(a, b; p, q)` of the given kind, normalising the
    /// fields the family ignores.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        family: FamilyId,
        kind: SeqKind,
        a: Rat,
        b: Rat,
        p: Rat,
        q: Rat,
        m: i64,
        k: i64,
        n: i64,
        big_n: Option<i64>,
        sign: i8,
    ) -> Result<SumSpec, ParamError> {
        let kind = family.forced_kind().unwrap_or(kind);
        let params = HoradamParams::of_kind(kind, a, b, p, q)?;
        Ok(SumSpec {
            params,
            kind,
            family,
            m,
            k,
            n,
            big_n,
            sign,
        }
        .canonical())
    }

    /// Spec over an existing instance.
    pub fn over(params: &HoradamParams, family: FamilyId, m: i64, k: i64) -> SumSpec {
        let kind = family.forced_kind().unwrap_or(SeqKind::W);
        let params = match kind {
            SeqKind::W => params.clone(),
            SeqKind::U => params.u_params(),
            SeqKind::V => params.v_params(),
        };
        SumSpec {
            params,
            kind,
            family,
            m,
            k,
            n: 0,
            big_n: None,
            sign: 1,
        }
        .canonical()
    }

    pub fn with_n(mut self, n: i64) -> SumSpec {
        self.n = n;
        self.canonical()
    }

    pub fn with_terms(mut self, big_n: i64) -> SumSpec {
        self.big_n = Some(big_n);
        self.canonical()
    }

    pub fn with_sign(mut self, sign: i8) -> SumSpec {
        self.sign = sign;
        self.canonical()
    }

    fn canonical(mut self) -> SumSpec {
        if !self.family.uses_n() {
            self.n = 0;
        }
        if let Some(s) = self.family.fixed_sign() {
            self.sign = s;
        }
        if self.family.is_infinite() {
            self.big_n = None;
        }
        self
    }

    /// The left-hand side this spec sums.
    pub fn shape(&self) -> Shape {
        let (m, k, n) = (self.m, self.k, self.n);
        let count = self.big_n.unwrap_or(0);
        use FamilyId::*;
        let (seq, weight_step, weight_off, step, x_off, y_off, count) = match self.family {
            T1Fin | T1Eq | C2Inf => (SeqKind::W, m, -m * k, m, n - m * k, n + m * k, count),
            T8Signed | C8Inf => (SeqKind::W, m, -m * k, m, n - m * k, n + m * k, 2 * count),
            C1Fin => (SeqKind::W, m, -m * k, m, 0, 2 * m * k, count),
            T2Fin | T2Eq | C3Inf => (SeqKind::W, m, -m * k, m, -m * k, m * k, count),
            T3VFin => (SeqKind::V, m, -m * k, m, -m * k, m * k, count),
            T3UFin => (SeqKind::U, m, 0, m, 0, 2 * m * k, count),
            T5Fin | T5Inf => (SeqKind::W, m, 0, m, 0, 2 * m * k, count),
            T9Fin | C9Inf | C9InfAlt => (
                SeqKind::W,
                2 * m,
                -m * k,
                2 * m,
                n - m * k,
                n + m * k,
                count,
            ),
            T11Fin | T11Inf | T11InfAlt => (SeqKind::W, 2 * m, -m * k, 2 * m, -m * k, m * k, count),
        };
        Shape {
            seq,
            weight_step,
            weight_off,
            step,
            x_off,
            y_off,
            sign: self.sign,
            count: if self.family.is_infinite() {
                None
            } else {
                Some(count)
            },
        }
    }

    pub fn record(&self) -> SpecRecord {
        SpecRecord {
            family: self.family,
            kind: self.kind,
            a: self.params.a().clone(),
            b: self.params.b().clone(),
            p: self.params.p().clone(),
            q: self.params.q().clone(),
            m: self.m,
            k: self.k,
            n: self.family.uses_n().then_some(self.n),
            big_n: self.big_n,
            sign: self.family.is_signed().then_some(self.sign),
        }
    }
}

impl fmt::Display for SumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} over {} m={} k={}",
            self.family, self.params, self.m, self.k
        )?;
        if self.family.uses_n() {
            write!(f, " n={}", self.n)?;
        }
        if let Some(big_n) = self.big_n {
            write!(f, " N={big_n}")?;
        }
        if self.family.is_signed() {
            write!(f, " sign={}", if self.sign < 0 { "-" } else { "+" })?;
        }
        Ok(())
    }
}

/// Serializable echo of a spec.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpecRecord {
    pub family: FamilyId,
    pub kind: SeqKind,
    pub a: Rat,
    pub b: Rat,
    pub p: Rat,
    pub q: Rat,
    pub m: i64,
    pub k: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<i64>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", default)]
    pub big_n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sign: Option<i8>,
}

impl SpecRecord {
    /// A record with the fields the family ignores normalised away, so that
    /// equal sums get equal records.
    #[allow(clippy::too_many_arguments)]
    pub fn canonical(
        family: FamilyId,
        kind: SeqKind,
        a: Rat,
        b: Rat,
        p: Rat,
        q: Rat,
        m: i64,
        k: i64,
        n: i64,
        big_n: Option<i64>,
        sign: i8,
    ) -> SpecRecord {
        let kind = family.forced_kind().unwrap_or(kind);
        let (a, b) = kind.seeds(&a, &b, &p);
        SpecRecord {
            family,
            kind,
            a,
            b,
            p,
            q,
            m,
            k,
            n: family.uses_n().then_some(n),
            big_n: if family.is_infinite() { None } else { big_n },
            sign: family.is_signed().then_some(sign),
        }
    }

    pub fn to_spec(&self) -> Result<SumSpec, ParamError> {
        SumSpec::new(
            self.family,
            self.kind,
            self.a.clone(),
            self.b.clone(),
            self.p.clone(),
            self.q.clone(),
            self.m,
            self.k,
            self.n.unwrap_or(0),
            self.big_n,
            self.sign.unwrap_or(1),
        )
    }
}

/// Left-hand side term pattern: `sign^i · q^(weight_step·i + weight_off) /
/// (S_{step·i + x_off} · S_{step·i + y_off})` for `i = 1..=count`
/// (unbounded when `count` is `None`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub seq: SeqKind,
    pub weight_step: i64,
    pub weight_off: i64,
    pub step: i64,
    pub x_off: i64,
    pub y_off: i64,
    pub sign: i8,
    pub count: Option<i64>,
}

impl Shape {
    pub fn x(&self, i: i64) -> i64 {
        self.step * i + self.x_off
    }
    pub fn y(&self, i: i64) -> i64 {
        self.step * i + self.y_off
    }
    pub fn weight_exp(&self, i: i64) -> i64 {
        self.weight_step * i + self.weight_off
    }
}

/// A sequence index that validation found nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexRef {
    pub seq: SeqKind,
    pub index: i64,
}

/// A spec that passed [`validate`], with the screened (nonzero) terms.
#[derive(Clone, Debug)]
pub struct ValidSpec {
    spec: SumSpec,
    screened: BTreeMap<IndexRef, Rat>,
    horizon: Option<i64>,
}

impl ValidSpec {
    pub fn spec(&self) -> &SumSpec {
        &self.spec
    }

    pub fn screened(&self) -> &BTreeMap<IndexRef, Rat> {
        &self.screened
    }

    /// For infinite families, the index from which `w` never vanishes.
    pub fn horizon(&self) -> Option<i64> {
        self.horizon
    }
}

/// Range checks; `parity` also enforces the sign-parity rule, which only the
/// closed forms need.
pub(crate) fn structural(spec: &SumSpec, parity: bool) -> Result<(), ValidateError> {
    let f = spec.family;
    let bad = |msg: String| Err(ValidateError::BadParameter(msg));
    for (name, v) in [
        ("m", spec.m),
        ("k", spec.k),
        ("n", spec.n),
        ("N", spec.big_n.unwrap_or(0)),
    ] {
        if v.abs() > MAX_PARAM {
            return bad(format!("|{name}| = {} exceeds {MAX_PARAM}", v.abs()));
        }
    }
    if spec.k < 1 {
        return bad(format!("k must be >= 1, got {}", spec.k));
    }
    if spec.sign != 1 && spec.sign != -1 {
        return bad(format!("sign must be +1 or -1, got {}", spec.sign));
    }
    if f.is_infinite() {
        if spec.m < 1 {
            return Err(ValidateError::DivergentSpec(format!(
                "infinite sums need m >= 1, got {}",
                spec.m
            )));
        }
    } else {
        if spec.m == 0 {
            return bad("m must be nonzero".into());
        }
        match spec.big_n {
            None => return bad(format!("{f} needs N")),
            Some(n) if n < 0 => return bad(format!("N must be >= 0, got {n}")),
            _ => {}
        }
    }
    if parity && f.is_double_step() && spec.sign < 0 {
        if spec.k % 2 != 0 {
            return Err(ValidateError::SignParity("even k"));
        }
        if spec.big_n.is_some_and(|n| n % 2 != 0) {
            return Err(ValidateError::SignParity("even N"));
        }
    }
    Ok(())
}

/// Denominator indices of the closed and equivalent right-hand sides.
fn closed_form_indices(spec: &SumSpec) -> Vec<IndexRef> {
    let (m, k, n) = (spec.m, spec.k, spec.n);
    let big_n = spec.big_n.unwrap_or(0);
    let w = |index| IndexRef {
        seq: SeqKind::W,
        index,
    };
    let u = |index| IndexRef {
        seq: SeqKind::U,
        index,
    };
    let v = |index| IndexRef {
        seq: SeqKind::V,
        index,
    };
    let mut out = Vec::new();
    use FamilyId::*;
    match spec.family {
        T1Fin | T1Eq => {
            (1..=2 * k).for_each(|j| out.extend([w(m * (j - k) + n), w(m * (j + big_n - k) + n)]))
        }
        C1Fin => (1..=2 * k).for_each(|j| out.extend([w(m * j), w(m * (j + big_n))])),
        C2Inf | C8Inf => (1..=2 * k).for_each(|j| out.push(w(m * (j - k) + n))),
        T2Fin | T2Eq => {
            (1..=2 * k).for_each(|j| out.extend([w(m * (j - k)), w(m * (j + big_n - k))]))
        }
        C3Inf => (1..=2 * k).for_each(|j| out.push(w(m * (j - k)))),
        T3VFin => (1..=2 * k).for_each(|j| out.extend([v(m * (j - k)), v(m * (j + big_n - k))])),
        T3UFin => (1..=2 * k).for_each(|j| out.extend([u(m * j), u(m * (j + big_n))])),
        T5Fin => (1..=2 * k).for_each(|j| out.extend([w(m * j), w(m * (j + big_n))])),
        T5Inf => (1..=2 * k).for_each(|j| out.push(w(m * j))),
        T8Signed => (1..=2 * k)
            .for_each(|j| out.extend([w(m * (j - k) + n), w(m * (j + 2 * big_n - k) + n)])),
        T9Fin => (1..=k)
            .for_each(|j| out.extend([w(m * (2 * j - k) + n), w(m * (2 * (j + big_n) - k) + n)])),
        C9Inf | C9InfAlt => (1..=k).for_each(|j| out.push(w(m * (2 * j - k) + n))),
        T11Fin => {
            (1..=k).for_each(|j| out.extend([w(m * (2 * j - k)), w(m * (2 * (j + big_n) - k))]))
        }
        T11Inf | T11InfAlt => (1..=k).for_each(|j| out.push(w(m * (2 * j - k)))),
    }
    out
}

fn seq_term(spec: &SumSpec, r: IndexRef) -> Rat {
    match r.seq {
        SeqKind::W => spec.params.term(r.index),
        SeqKind::U => spec.params.u(r.index),
        SeqKind::V => spec.params.v(r.index),
    }
}

/// Checks every precondition of the spec's identity, cheapest first.
pub fn validate(spec: &SumSpec) -> Result<ValidSpec, ValidateError> {
    structural(spec, true)?;
    let f = spec.family;
    let params = &spec.params;
    if f.is_infinite() {
        if !params.disc().is_positive() {
            return Err(ValidateError::DivergentSpec(
                "infinite sums need a positive discriminant".into(),
            ));
        }
        if !params.p().is_positive() {
            return Err(ValidateError::DivergentSpec(
                "infinite sums need p > 0 so that |beta/alpha| < 1".into(),
            ));
        }
    }
    if f.divides_by_e_w() && params.e_w().is_zero() {
        return Err(ValidateError::EwZero);
    }
    let (m, k, n) = (spec.m, spec.k, spec.n);
    let mut screened = BTreeMap::new();
    let mut prefactor = |index: i64, err: ValidateError| {
        let value = params.u(index);
        if value.is_zero() {
            return Err(err);
        }
        screened.insert(
            IndexRef {
                seq: SeqKind::U,
                index,
            },
            value,
        );
        Ok(())
    };
    if f.uses_n() {
        prefactor(n, ValidateError::UnZero { index: n })?;
    }
    if f == FamilyId::C1Fin {
        prefactor(m * k, ValidateError::UnZero { index: m * k })?;
    }
    prefactor(2 * k * m, ValidateError::U2kmZero { index: 2 * k * m })?;

    let shape = spec.shape();
    let mut wanted: BTreeSet<IndexRef> = closed_form_indices(spec).into_iter().collect();
    let horizon = if f.is_infinite() {
        let h = nonvanishing_horizon(params)?;
        // below the horizon every denominator is checked directly
        let mut i = 1;
        while shape.x(i) < h || shape.y(i) < h {
            wanted.insert(IndexRef {
                seq: shape.seq,
                index: shape.x(i),
            });
            wanted.insert(IndexRef {
                seq: shape.seq,
                index: shape.y(i),
            });
            i += 1;
        }
        Some(h)
    } else {
        for i in 1..=shape.count.unwrap_or(0) {
            wanted.insert(IndexRef {
                seq: shape.seq,
                index: shape.x(i),
            });
            wanted.insert(IndexRef {
                seq: shape.seq,
                index: shape.y(i),
            });
        }
        None
    };
    for r in wanted {
        let value = seq_term(spec, r);
        if value.is_zero() {
            return Err(ValidateError::ZeroDenominatorAt {
                seq: seq_char(r.seq),
                index: r.index,
            });
        }
        screened.insert(r, value);
    }
    Ok(ValidSpec {
        spec: spec.clone(),
        screened,
        horizon,
    })
}

/// An evaluated sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumValue {
    /// Exact value; `y = 0` for every finite family.
    pub exact: QF,
    pub family: FamilyId,
    pub spec: SpecRecord,
}
