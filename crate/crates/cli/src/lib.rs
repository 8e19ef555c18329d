//! The `horadam` command: evaluate one sum, verify a grid, run the printed
//! fixtures, or check the Good/Miller classics.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid spec or range,
//! 3 unparsable arguments or config.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use horadam_core::families::{classic_good, classic_miller};
use horadam_core::oracle::{good_direct, GOOD_DIRECT_MAX};
use horadam_core::verify::{run_grid_with, Evaluators};
use horadam_core::{
    direct_finite, direct_infinite, eval_finite_closed, eval_infinite_closed, run_fixtures,
    Decimal, FamilyId, GridConfig, Rat, SeqKind, SpecRecord, SumSpec, VerifyReport, QF,
};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

/// Terms of Good's series summed for the `--miller` comparison.
const MILLER_TERMS: i64 = 12;

#[derive(Parser, Debug)]
#[command(
    name = "horadam",
    version,
    about = "Exact reciprocal sums over Horadam sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one sum by its closed form, term by term, or both.
    Eval(Box<EvalArgs>),
    /// Check every closed form on a parameter grid against direct summation.
    Verify(VerifyArgs),
    /// Check the printed Fibonacci and Lucas specializations.
    Fixtures(ReportArgs),
    /// Good's finite sums and Miller's value of their limit.
    Classics(ClassicsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Closed,
    Direct,
    Both,
}

fn parse_sign(s: &str) -> Result<i8, String> {
    match s {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(format!("expected + or -, got {s:?}")),
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    family: FamilyId,
    #[arg(long, allow_hyphen_values = true)]
    a: Rat,
    #[arg(long, allow_hyphen_values = true)]
    b: Rat,
    #[arg(long, allow_hyphen_values = true)]
    p: Rat,
    #[arg(long, allow_hyphen_values = true)]
    q: Rat,
    #[arg(long, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    /// Index shift; required by families that use it.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i64>,
    /// Number of terms; required by finite families.
    #[arg(long = "N", allow_hyphen_values = true)]
    big_n: Option<i64>,
    /// `+` or `-`; read by the signed families only.
    #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
    sign: i8,
    #[arg(long, value_enum, default_value_t = Mode::Closed)]
    mode: Mode,
    /// Significant digits of the decimal rendering.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    precision: u32,
    /// Target tail bound for direct summation of infinite families.
    #[arg(long, default_value = "1e-30")]
    tol: Rat,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Grid config (TOML); the shipped default grid when omitted.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Overrides the config's sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's case cap (0 = every case).
    #[arg(long)]
    max_cases: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Perturbs every closed form, to show the harness catches it.
    #[arg(long, hide = true)]
    corrupt: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("which").required(true).args(["good", "miller"])))]
struct ClassicsArgs {
    /// Good's sum of 1/F_{2^i} for i = 0..=N.
    #[arg(long, allow_hyphen_values = true)]
    good: Option<i64>,
    /// Miller's value of the infinite sum.
    #[arg(long)]
    miller: bool,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    precision: u32,
    #[arg(long)]
    json: bool,
}

/// An exact value with its decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rendered {
    pub exact: String,
    pub decimal: String,
}

/// Output of a direct (term-by-term) evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectOutput {
    #[serde(flatten)]
    pub value: Rendered,
    /// Set for infinite sums, whose value is a partial sum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<Rendered>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms_used: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub spec: SpecRecord,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed: Option<Rendered>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct: Option<DirectOutput>,
    /// `|closed − direct|` in mode `both`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difference: Option<String>,
    /// Mode `both`: exact agreement (finite) or containment in the bracket (infinite).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicsOutput {
    pub name: String,
    pub closed: Rendered,
    pub direct: DirectOutput,
    pub difference: String,
}

struct Failure {
    code: i32,
    message: String,
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: e.to_string(),
    }
}

fn render(v: &QF, precision: u32) -> Result<Rendered, Failure> {
    Ok(Rendered {
        exact: v.to_string(),
        decimal: Decimal::from_qf(v, precision as usize)
            .map_err(invalid)?
            .to_string(),
    })
}

fn render_rat(v: &Rat, precision: u32) -> Result<Rendered, Failure> {
    Ok(Rendered {
        exact: v.to_string(),
        decimal: Decimal::from_rat(v, precision as usize)
            .map_err(invalid)?
            .to_string(),
    })
}

fn difference(a: &QF, b: &QF, precision: u32) -> Result<String, Failure> {
    let d = a.try_sub(b).and_then(|d| d.abs()).map_err(invalid)?;
    Ok(Decimal::from_qf(&d, precision as usize)
        .map_err(invalid)?
        .to_string())
}

fn eval(args: &EvalArgs) -> Result<(EvalOutput, i32), Failure> {
    let family = args.family;
    if family.uses_n() && args.n.is_none() {
        return Err(invalid(format!(
            "bad-parameter: --n is required for {family}"
        )));
    }
    if family.is_finite() && args.big_n.is_none() {
        return Err(invalid(format!(
            "bad-parameter: --N is required for {family}"
        )));
    }
    if family.is_infinite() && args.big_n.is_some() {
        return Err(invalid(format!(
            "bad-parameter: {family} is infinite and takes no --N"
        )));
    }
    let spec = SumSpec::new(
        family,
        SeqKind::W,
        args.a.clone(),
        args.b.clone(),
        args.p.clone(),
        args.q.clone(),
        args.m,
        args.k,
        args.n.unwrap_or(0),
        args.big_n,
        args.sign,
    )
    .map_err(invalid)?;
    let disc = spec.params.disc().clone();

    let closed = if args.mode == Mode::Direct {
        None
    } else {
        let v = if family.is_finite() {
            eval_finite_closed(&spec)
        } else {
            eval_infinite_closed(&spec)
        };
        Some(v.map_err(invalid)?.exact)
    };

    let mut direct = None;
    let mut bracket = None;
    if args.mode != Mode::Closed {
        if family.is_finite() {
            let v = direct_finite(&spec).map_err(invalid)?;
            direct = Some(QF::from_rat(v, &disc).map_err(invalid)?);
        } else {
            let b = direct_infinite(&spec, &args.tol).map_err(invalid)?;
            direct = Some(QF::from_rat(b.partial.clone(), &disc).map_err(invalid)?);
            bracket = Some(b);
        }
    }

    let mut out = EvalOutput {
        spec: spec.record(),
        mode: args.mode,
        closed: closed
            .as_ref()
            .map(|c| render(c, args.precision))
            .transpose()?,
        direct: None,
        difference: None,
        agrees: None,
    };
    if let Some(d) = &direct {
        out.direct = Some(DirectOutput {
            value: render(d, args.precision)?,
            tail_bound: bracket
                .as_ref()
                .map(|b| render_rat(&b.tail_bound, 5))
                .transpose()?,
            terms_used: bracket.as_ref().map(|b| b.terms_used),
        });
    }
    let mut code = EXIT_OK;
    if let (Some(c), Some(d)) = (&closed, &direct) {
        out.difference = Some(difference(c, d, args.precision)?);
        let agrees = match &bracket {
            Some(b) => b.contains(c).map_err(invalid)?,
            None => c == d,
        };
        out.agrees = Some(agrees);
        if !agrees {
            code = EXIT_CHECK_FAILED;
        }
    }
    Ok((out, code))
}

/// Plain-text form of an evaluation.
pub fn render_eval(out: &EvalOutput) -> String {
    let mut s = String::new();
    let spec = &out.spec;
    let _ = write!(
        s,
        "{} over w(a={}, b={}; p={}, q={}) m={} k={}",
        spec.family, spec.a, spec.b, spec.p, spec.q, spec.m, spec.k
    );
    if let Some(n) = spec.n {
        let _ = write!(s, " n={n}");
    }
    if let Some(big_n) = spec.big_n {
        let _ = write!(s, " N={big_n}");
    }
    if let Some(sign) = spec.sign {
        let _ = write!(s, " sign={}", if sign < 0 { "-" } else { "+" });
    }
    s.push('\n');
    if let Some(c) = &out.closed {
        let _ = writeln!(s, "closed: {}", c.exact);
        let _ = writeln!(s, "closed decimal: {}", c.decimal);
    }
    if let Some(d) = &out.direct {
        match &d.tail_bound {
            // the exact partial sum can run to thousands of digits; JSON has it
            Some(tail) => {
                let _ = writeln!(s, "partial decimal: {}", d.value.decimal);
                let _ = writeln!(s, "tail bound: {}", tail.decimal);
                if let Some(t) = d.terms_used {
                    let _ = writeln!(s, "terms used: {t}");
                }
            }
            None => {
                let _ = writeln!(s, "direct: {}", d.value.exact);
                let _ = writeln!(s, "direct decimal: {}", d.value.decimal);
            }
        }
    }
    if let Some(diff) = &out.difference {
        let _ = writeln!(s, "difference: {diff}");
    }
    if let Some(agrees) = out.agrees {
        let what = if out.direct.as_ref().is_some_and(|d| d.tail_bound.is_some()) {
            "within tail bound"
        } else {
            "equal"
        };
        let _ = writeln!(s, "{what}: {}", if agrees { "yes" } else { "no" });
    }
    s
}

/// Plain-text form of a verification report.
pub fn render_report(r: &VerifyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "total {}  passed {}  skipped {}  failed {}",
        r.total,
        r.passed,
        r.skipped_total(),
        r.failed.len()
    );
    for (reason, count) in &r.skipped {
        let _ = writeln!(s, "  skipped {reason}: {count}");
    }
    for f in &r.failed {
        let _ = writeln!(s, "FAIL {} [{}]", f.case, f.check);
        let _ = writeln!(s, "  lhs {}", f.lhs);
        let _ = writeln!(s, "  rhs {}", f.rhs);
        let _ = writeln!(s, "  |diff| {}", f.abs_diff_decimal);
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

/// Plain-text form of a classics comparison.
pub fn render_classics(out: &ClassicsOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", out.name);
    let _ = writeln!(s, "closed: {}", out.closed.exact);
    let _ = writeln!(s, "closed decimal: {}", out.closed.decimal);
    let _ = writeln!(s, "direct: {}", out.direct.value.exact);
    let _ = writeln!(s, "direct decimal: {}", out.direct.value.decimal);
    if let Some(t) = &out.direct.tail_bound {
        let _ = writeln!(s, "tail bound: {}", t.decimal);
    }
    let _ = writeln!(s, "difference: {}", out.difference);
    s
}

fn classics(args: &ClassicsArgs) -> Result<ClassicsOutput, Failure> {
    let five = Rat::from(5);
    let qf = |r: Rat| QF::from_rat(r, &five).map_err(invalid);
    if let Some(n) = args.good {
        let closed = classic_good(n).map_err(invalid)?;
        let direct = good_direct(n).map_err(|_| {
            invalid(format!(
                "range: N = {n} outside 1..={GOOD_DIRECT_MAX} for the direct sum"
            ))
        })?;
        return Ok(ClassicsOutput {
            name: format!("good N={n}"),
            closed: render_rat(&closed, args.precision)?,
            direct: DirectOutput {
                value: render_rat(&direct, args.precision)?,
                tail_bound: None,
                terms_used: Some(n as usize + 1),
            },
            difference: difference(&qf(closed)?, &qf(direct)?, args.precision)?,
        });
    }
    let closed = classic_miller();
    let partial = good_direct(MILLER_TERMS).map_err(invalid)?;
    // later terms are at most t, t², t⁴, … with t = 1/F_{2^(N+1)}
    let next = Rat::one()
        .checked_div(
            &horadam_core::horadam::lucas_u(&Rat::one(), &Rat::from(-1), 1 << (MILLER_TERMS + 1))
                .map_err(invalid)?,
        )
        .map_err(invalid)?;
    let tail = next.checked_div(&(Rat::one() - &next)).map_err(invalid)?;
    Ok(ClassicsOutput {
        name: format!("miller (direct: good N={MILLER_TERMS})"),
        closed: render(&closed, args.precision)?,
        direct: DirectOutput {
            value: render_rat(&partial, args.precision)?,
            tail_bound: Some(render_rat(&tail, 5)?),
            terms_used: Some(MILLER_TERMS as usize + 1),
        },
        difference: difference(&closed, &qf(partial)?, args.precision)?,
    })
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn report_code(r: &VerifyReport) -> i32 {
    if r.is_success() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn dispatch(cli: Cli) -> Result<(String, i32), Failure> {
    match cli.command {
        Command::Eval(args) => {
            let (out, code) = eval(&args)?;
            Ok((
                if args.json {
                    json(&out)
                } else {
                    render_eval(&out)
                },
                code,
            ))
        }
        Command::Verify(args) => {
            let mut config = match &args.grid {
                Some(path) => GridConfig::load(path),
                None => Ok(GridConfig::default_grid()),
            }
            .map_err(|e| Failure {
                code: EXIT_PARSE,
                message: e.to_string(),
            })?;
            if let Some(seed) = args.seed {
                config.seed = seed;
            }
            if let Some(cap) = args.max_cases {
                config.max_cases = cap;
            }
            let ev = if args.corrupt {
                Evaluators::corrupted()
            } else {
                Evaluators::default()
            };
            let r = run_grid_with(&config, &ev);
            Ok((
                if args.json {
                    json(&r)
                } else {
                    render_report(&r)
                },
                report_code(&r),
            ))
        }
        Command::Fixtures(args) => {
            let r = run_fixtures();
            Ok((
                if args.json {
                    json(&r)
                } else {
                    render_report(&r)
                },
                report_code(&r),
            ))
        }
        Command::Classics(args) => {
            let out = classics(&args)?;
            Ok((
                if args.json {
                    json(&out)
                } else {
                    render_classics(&out)
                },
                EXIT_OK,
            ))
        }
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_PARSE
                }
            };
        }
    };
    match dispatch(cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
