//! Grid-driven cross-checks of closed forms against the oracle.
//!
//! A [`GridConfig`] expands into cases: one per distinct sum spec, plus the
//! two `u`/`v` relations per `(p, q, m, k, N)`. Each case passes, is skipped
//! with the validation reason, or fails with both sides recorded.

mod fixtures;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{Decimal, Rat, QF};
use crate::families::{
    byproduct_relation_residual, validate, FamilyId, Relation, SpecRecord, SumValue, ValidSpec,
    ValidateError,
};
use crate::horadam::{HoradamParams, SeqKind};
use crate::oracle::{direct_finite, direct_infinite};

pub use fixtures::run_fixtures;

/// Digits used for `abs_diff_decimal`.
pub const DIFF_DIGITS: usize = 30;

const DEFAULT_GRID: &str = include_str!("../../grids/default.toml");

fn default_families() -> Vec<FamilyId> {
    FamilyId::ALL.to_vec()
}

fn default_signs() -> Vec<i8> {
    vec![1, -1]
}

fn default_tol() -> Rat {
    "1e-30".parse().expect("valid literal")
}

fn default_true() -> bool {
    true
}

/// Parameter ranges of a verification run. Loaded from TOML; every key is a
/// list except the scalars `infinite_tol`, `seed`, `max_cases`, `relations`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub a: Vec<Rat>,
    pub b: Vec<Rat>,
    pub p: Vec<Rat>,
    pub q: Vec<Rat>,
    pub m: Vec<i64>,
    pub k: Vec<i64>,
    pub n: Vec<i64>,
    #[serde(rename = "N")]
    pub big_n: Vec<i64>,
    #[serde(default = "default_families")]
    pub families: Vec<FamilyId>,
    /// Signs tried for the signed families.
    #[serde(default = "default_signs")]
    pub signs: Vec<i8>,
    #[serde(default = "default_tol")]
    pub infinite_tol: Rat,
    #[serde(default)]
    pub seed: u64,
    /// Keep a seeded random subset of this many spec cases; 0 keeps all.
    #[serde(default)]
    pub max_cases: usize,
    /// Also check the two relations between `u` and `v`.
    #[serde(default = "default_true")]
    pub relations: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid grid config: {0}")]
    Parse(String),
    #[error("invalid grid config: {0}")]
    Invalid(String),
}

impl GridConfig {
    pub fn from_toml_str(text: &str) -> Result<GridConfig, ConfigError> {
        let config: GridConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<GridConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        GridConfig::from_toml_str(&text)
    }

    /// The grid shipped in `grids/default.toml`.
    pub fn default_grid() -> GridConfig {
        GridConfig::from_toml_str(DEFAULT_GRID).expect("shipped grid is valid")
    }

    fn check(&self) -> Result<(), ConfigError> {
        let lists = [
            ("a", self.a.len()),
            ("b", self.b.len()),
            ("p", self.p.len()),
            ("q", self.q.len()),
            ("m", self.m.len()),
            ("k", self.k.len()),
            ("n", self.n.len()),
            ("N", self.big_n.len()),
            ("signs", self.signs.len()),
        ];
        if let Some((name, _)) = lists.iter().find(|(_, len)| *len == 0) {
            return Err(ConfigError::Invalid(format!("range {name} is empty")));
        }
        if !self.infinite_tol.is_positive() {
            return Err(ConfigError::Invalid("infinite_tol must be positive".into()));
        }
        if let Some(s) = self.signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(ConfigError::Invalid(format!(
                "signs must be 1 or -1, got {s}"
            )));
        }
        Ok(())
    }
}

/// One failed case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    /// Human-readable case description.
    pub case: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SpecRecord>,
    pub check: String,
    pub lhs: String,
    pub rhs: String,
    pub abs_diff_decimal: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub total: usize,
    pub passed: usize,
    /// Skip counts keyed by validation reason.
    pub skipped: BTreeMap<String, usize>,
    pub failed: Vec<Failure>,
    /// Observations that are not pass/fail data.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn skipped_total(&self) -> usize {
        self.skipped.values().sum()
    }

    pub fn is_success(&self) -> bool {
        self.failed.is_empty()
    }

    fn push(&mut self, outcome: Outcome) {
        self.total += 1;
        match outcome {
            Outcome::Pass => self.passed += 1,
            Outcome::Skip(reason) => *self.skipped.entry(reason.to_string()).or_default() += 1,
            Outcome::Fail(f) => self.failed.push(*f),
        }
    }
}

#[derive(Debug)]
pub(super) enum Outcome {
    Pass,
    Skip(&'static str),
    Fail(Box<Failure>),
}

/// The closed-form evaluators a run checks; replaceable so the harness can
/// be shown to catch a wrong one.
#[derive(Clone, Copy)]
pub struct Evaluators {
    pub finite_closed: fn(&ValidSpec) -> Result<SumValue, ValidateError>,
    pub finite_equivalent: fn(&ValidSpec) -> Result<SumValue, ValidateError>,
    pub infinite_closed: fn(&ValidSpec) -> Result<SumValue, ValidateError>,
}

impl Default for Evaluators {
    fn default() -> Evaluators {
        Evaluators {
            finite_closed: ValidSpec::finite_closed,
            finite_equivalent: ValidSpec::finite_equivalent,
            infinite_closed: ValidSpec::infinite_closed,
        }
    }
}

fn nudge(v: Result<SumValue, ValidateError>) -> Result<SumValue, ValidateError> {
    v.map(|mut s| {
        s.exact = s.exact.add_rat(&Rat::new(1, 1000).expect("nonzero"));
        s
    })
}

impl Evaluators {
    /// Evaluators that are off by 1/1000, for harness self-tests.
    pub fn corrupted() -> Evaluators {
        Evaluators {
            finite_closed: |v| nudge(v.finite_closed()),
            finite_equivalent: |v| nudge(v.finite_equivalent()),
            infinite_closed: |v| nudge(v.infinite_closed()),
        }
    }
}

/// Text form of an exact value: `num/den`, or `x + y*sqrt(D)`.
pub fn render_exact(v: &QF) -> String {
    v.to_string()
}

fn abs_diff(lhs: &QF, rhs: &QF) -> String {
    lhs.try_sub(rhs)
        .and_then(|d| d.abs())
        .and_then(|d| Decimal::from_qf(&d, DIFF_DIGITS))
        .map_or_else(|e| format!("n/a ({e})"), |d| d.to_string())
}

pub(super) fn failure(
    case: String,
    spec: Option<SpecRecord>,
    check: &str,
    lhs: &QF,
    rhs: &QF,
) -> Outcome {
    Outcome::Fail(Box::new(Failure {
        case,
        spec,
        check: check.into(),
        lhs: render_exact(lhs),
        rhs: render_exact(rhs),
        abs_diff_decimal: abs_diff(lhs, rhs),
    }))
}

pub(super) fn error_failure(
    case: String,
    spec: Option<SpecRecord>,
    check: &str,
    err: String,
) -> Outcome {
    Outcome::Fail(Box::new(Failure {
        case,
        spec,
        check: check.into(),
        lhs: err,
        rhs: String::new(),
        abs_diff_decimal: String::new(),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Case {
    Sum(SpecRecord),
    Relation {
        which: Relation,
        p: Rat,
        q: Rat,
        m: i64,
        k: i64,
        big_n: i64,
    },
}

fn spec_cases(config: &GridConfig) -> Vec<SpecRecord> {
    let mut set = BTreeSet::new();
    for &family in &config.families {
        for a in &config.a {
            for b in &config.b {
                for p in &config.p {
                    for q in &config.q {
                        for &m in &config.m {
                            for &k in &config.k {
                                for &n in &config.n {
                                    for &big_n in &config.big_n {
                                        for &sign in &config.signs {
                                            set.insert(SpecRecord::canonical(
                                                family,
                                                SeqKind::W,
                                                a.clone(),
                                                b.clone(),
                                                p.clone(),
                                                q.clone(),
                                                m,
                                                k,
                                                n,
                                                Some(big_n),
                                                sign,
                                            ));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}

fn relation_cases(config: &GridConfig) -> Vec<Case> {
    let mut out = BTreeSet::new();
    for which in [Relation::First, Relation::Second] {
        for p in &config.p {
            for q in &config.q {
                for &m in &config.m {
                    for &k in &config.k {
                        for &big_n in &config.big_n {
                            out.insert(Case::Relation {
                                which,
                                p: p.clone(),
                                q: q.clone(),
                                m,
                                k,
                                big_n,
                            });
                        }
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

fn check_sum(record: &SpecRecord, config: &GridConfig, ev: &Evaluators) -> Outcome {
    let spec = match record.to_spec() {
        Ok(s) => s,
        Err(e) => return Outcome::Skip(e.reason()),
    };
    let valid = match validate(&spec) {
        Ok(v) => v,
        Err(e) => return Outcome::Skip(e.reason()),
    };
    let case = spec.to_string();
    let rec = Some(record.clone());
    if spec.family.is_finite() {
        let direct = match direct_finite(&spec) {
            Ok(d) => d,
            Err(e) => return error_failure(case, rec, "direct", e.to_string()),
        };
        let direct = QF::from_rat(direct, spec.params.disc()).expect("nonzero disc");
        for (name, f) in [
            ("closed-vs-direct", ev.finite_closed),
            ("equivalent-vs-direct", ev.finite_equivalent),
        ] {
            match f(&valid) {
                Ok(v) if v.exact == direct => {}
                Ok(v) => return failure(case, rec, name, &v.exact, &direct),
                Err(e) => return error_failure(case, rec, name, e.to_string()),
            }
        }
        Outcome::Pass
    } else {
        let closed = match (ev.infinite_closed)(&valid) {
            Ok(v) => v.exact,
            Err(e) => return error_failure(case, rec, "closed", e.to_string()),
        };
        let bracket = match direct_infinite(&spec, &config.infinite_tol) {
            Ok(b) => b,
            Err(e) => return error_failure(case, rec, "direct", e.to_string()),
        };
        match bracket.contains(&closed) {
            Ok(true) => Outcome::Pass,
            Ok(false) => {
                let partial =
                    QF::from_rat(bracket.partial.clone(), closed.disc()).expect("nonzero disc");
                let mut out = failure(case, rec, "closed-within-tail-bound", &closed, &partial);
                if let Outcome::Fail(f) = &mut out {
                    f.rhs = format!("{} (tail bound {})", f.rhs, bracket.tail_bound);
                }
                out
            }
            Err(e) => error_failure(case, rec, "closed-within-tail-bound", e.to_string()),
        }
    }
}

fn relation_case_name(which: Relation, p: &Rat, q: &Rat, m: i64, k: i64, big_n: i64) -> String {
    format!("relation {which} over (p={p}, q={q}) m={m} k={k} N={big_n}")
}

fn check_relation(which: Relation, p: &Rat, q: &Rat, m: i64, k: i64, big_n: i64) -> Outcome {
    let params =
        match HoradamParams::of_kind(SeqKind::U, Rat::zero(), Rat::one(), p.clone(), q.clone()) {
            Ok(x) => x,
            Err(e) => return Outcome::Skip(e.reason()),
        };
    match byproduct_relation_residual(which, &params, m, k, big_n) {
        Ok(r) if r.is_zero() => Outcome::Pass,
        Ok(r) => {
            let zero = QF::zero(params.disc()).expect("nonzero disc");
            let res = QF::from_rat(r, params.disc()).expect("nonzero disc");
            failure(
                relation_case_name(which, p, q, m, k, big_n),
                None,
                "residual-zero",
                &res,
                &zero,
            )
        }
        Err(e) => Outcome::Skip(e.reason()),
    }
}

fn check_case(case: &Case, config: &GridConfig, ev: &Evaluators) -> Outcome {
    match case {
        Case::Sum(r) => check_sum(r, config, ev),
        Case::Relation {
            which,
            p,
            q,
            m,
            k,
            big_n,
        } => check_relation(*which, p, q, *m, *k, *big_n),
    }
}

/// Reports whether the printed form of relation 2 (with `u_{m(i+N−k)+1}`)
/// holds on the grid; it is a note, not a check.
fn shifted_relation_note(config: &GridConfig) -> Option<String> {
    let mut nonzero = 0usize;
    let mut tried = 0usize;
    let mut first = None;
    for case in relation_cases(config) {
        let Case::Relation {
            which: Relation::First,
            p,
            q,
            m,
            k,
            big_n,
        } = case
        else {
            continue;
        };
        let Ok(params) =
            HoradamParams::of_kind(SeqKind::U, Rat::zero(), Rat::one(), p.clone(), q.clone())
        else {
            continue;
        };
        if let Ok(r) = byproduct_relation_residual(Relation::SecondShifted, &params, m, k, big_n) {
            tried += 1;
            if !r.is_zero() {
                nonzero += 1;
                first.get_or_insert_with(|| {
                    format!(
                        "{} residual {r}",
                        relation_case_name(Relation::SecondShifted, &p, &q, m, k, big_n)
                    )
                });
            }
        }
    }
    (tried > 0).then(|| {
        format!(
            "relation 2 with numerator u_{{m(i+N-k)+1}} is nonzero on {nonzero} of {tried} cases{}",
            first.map_or_else(String::new, |f| format!("; first: {f}"))
        )
    })
}

/// Runs every case of the grid with the standard evaluators.
pub fn run_grid(config: &GridConfig) -> VerifyReport {
    run_grid_with(config, &Evaluators::default())
}

/// Runs every case of the grid with the given evaluators.
pub fn run_grid_with(config: &GridConfig, ev: &Evaluators) -> VerifyReport {
    let mut specs = spec_cases(config);
    if config.max_cases > 0 && specs.len() > config.max_cases {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut keep = sample(&mut rng, specs.len(), config.max_cases).into_vec();
        keep.sort_unstable();
        specs = keep.into_iter().map(|i| specs[i].clone()).collect();
    }
    let mut cases: Vec<Case> = specs.into_iter().map(Case::Sum).collect();
    if config.relations {
        cases.extend(relation_cases(config));
    }
    let outcomes: Vec<Outcome> = cases
        .par_iter()
        .map(|c| check_case(c, config, ev))
        .collect();
    let mut report = VerifyReport::default();
    for o in outcomes {
        report.push(o);
    }
    if config.relations {
        report.notes.extend(shifted_relation_note(config));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(families: &str) -> GridConfig {
        GridConfig::from_toml_str(&format!(
            "a = [0]\nb = [1]\np = [1]\nq = [-1]\nm = [1, 2]\nk = [1, 2]\nn = [0, 1, 2]\nN = [1, 2, 3, 4, 5]\n\
             families = {families}\nrelations = false\n"
        ))
        .unwrap()
    }

    #[test]
    fn fibonacci_t1_grid_passes() {
        let r = run_grid(&small(r#"["T1_FIN"]"#));
        assert!(r.failed.is_empty(), "{:?}", r.failed);
        assert_eq!(r.total, 2 * 2 * 3 * 5);
        assert_eq!(r.skipped.get("u_n-zero"), Some(&20));
        // F_0 = 0 sits in the closed form at (m, k, n) = (1, 2, 1) and (2, 2, 2)
        assert_eq!(r.skipped.get("zero-denominator-at"), Some(&10));
        assert_eq!(r.passed, 30);
    }

    #[test]
    fn empty_family_list() {
        let r = run_grid(&small("[]"));
        assert_eq!(r.total, 0);
        assert!(r.is_success());
    }

    #[test]
    fn corrupted_evaluator_is_caught() {
        let r = run_grid_with(&small(r#"["T1_FIN", "C2_INF"]"#), &Evaluators::corrupted());
        assert!(!r.failed.is_empty());
        assert_eq!(r.passed, 0);
        assert!(r
            .failed
            .iter()
            .any(|f| f.check == "closed-within-tail-bound"));
    }

    #[test]
    fn report_json_round_trips() {
        let r = run_grid_with(&small(r#"["T1_FIN"]"#), &Evaluators::corrupted());
        let text = serde_json::to_string(&r).unwrap();
        let back: VerifyReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn config_errors() {
        assert!(GridConfig::from_toml_str("a = []").is_err());
        let bad = "a=[0]\nb=[1]\np=[1]\nq=[-1]\nm=[1]\nk=[1]\nn=[1]\nN=[1]\ninfinite_tol = \"0\"\n";
        assert!(matches!(
            GridConfig::from_toml_str(bad),
            Err(ConfigError::Invalid(_))
        ));
        let unknown = "a=[0]\nb=[1]\np=[1]\nq=[-1]\nm=[1]\nk=[1]\nn=[1]\nN=[1]\nbogus = 1\n";
        assert!(matches!(
            GridConfig::from_toml_str(unknown),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let mut c = small(r#"["T1_FIN", "T2_FIN"]"#);
        c.max_cases = 7;
        c.seed = 42;
        let a = run_grid(&c);
        let b = run_grid(&c);
        assert_eq!(a, b);
        assert_eq!(a.total, 7);
    }

    #[test]
    fn shipped_grid_parses() {
        let g = GridConfig::default_grid();
        assert_eq!(g.families.len(), FamilyId::ALL.len());
    }
}
