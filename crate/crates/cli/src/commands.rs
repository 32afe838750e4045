use std::fmt;

use num_complex::Complex;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use ejasym_core::coeffgen::expansion_coefficients;
use ejasym_core::expansions::{evaluate, theorem1_exponential, theorem2_exponential, EvalOptions, Truncation};
use ejasym_core::format::{format_paper, parse_complex, parse_decimal, ExpStyle};
use ejasym_core::oracle::{alternating_residual, direct_sum_with, poisson_jacobi_residual, OracleOptions, DEFAULT_MAX_TERMS};
use ejasym_core::params::Params;
use ejasym_core::special::{bernoulli, gamma, riemann_zeta, zeta_nonpositive_int};
use ejasym_core::tables::{expansion_row, table1, ExpansionRow, TABLE1_COUNT, TABLE1_PARAMS, TABLE2_ROWS, TABLE3_A, TABLE3_P, TABLE3_W};
use ejasym_core::{BigComplex, BigReal, ComplexExt, Error, Field, PrecisionCtx, Real};

use crate::args::{CoeffsArgs, EvalArgs, Format, Suite, TableArgs, VerifyArgs};
use crate::render::{cdec, dec, Grid, JsonComplex};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

/// Environment variable overriding the direct-summation term budget.
pub const MAX_TERMS_VAR: &str = "EJASYM_MAX_TERMS";

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

/// Text to print and the exit status.
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: EXIT_OK }
    }
}

pub fn max_terms() -> Result<u64, Failure> {
    match std::env::var(MAX_TERMS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Failure::invalid(format!("{MAX_TERMS_VAR}={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_TERMS),
    }
}

fn rational(name: &str, s: &str) -> Result<BigRational, Failure> {
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n).map_err(|e| Failure::invalid(format!("--{name}: {e}")))?;
        let d = parse_decimal(d).map_err(|e| Failure::invalid(format!("--{name}: {e}")))?;
        if d == BigRational::from_integer(0.into()) {
            return Err(Failure::invalid(format!("--{name}: zero denominator")));
        }
        return Ok(n / d);
    }
    parse_decimal(s).map_err(|e| Failure::invalid(format!("--{name}: {e}")))
}

fn complex(s: &str) -> Result<(BigRational, BigRational), Failure> {
    parse_complex(s).map_err(|e| Failure::invalid(format!("--a: {e}")))
}

fn render(grid: &Grid, format: Format, json: impl FnOnce(&Grid) -> serde_json::Value) -> String {
    match format {
        Format::Csv => grid.to_csv(),
        Format::Markdown => grid.to_markdown(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&json(grid)).expect("serializable")),
    }
}

#[derive(Serialize)]
struct AlgebraicReport {
    j_term: JsonComplex,
    sum: JsonComplex,
    terms: usize,
    cutoff: Option<u64>,
    remainder_estimate: String,
}

#[derive(Serialize)]
struct ExpansionReport {
    r: u32,
    hat: bool,
    psi: String,
    j0: Option<usize>,
    least_index: Option<usize>,
    least_term: Option<String>,
    leading_term: Option<String>,
    included: bool,
    sum: JsonComplex,
    remainder_estimate: String,
}

#[derive(Serialize)]
struct OracleReport {
    value: JsonComplex,
    tail_bound: String,
    terms_used: u64,
}

#[derive(Serialize)]
struct EvalReport {
    p: String,
    w: String,
    a: JsonComplex,
    digits: u32,
    regime: &'static str,
    double_pole: Option<u64>,
    algebraic: AlgebraicReport,
    exponential: Vec<ExpansionReport>,
    exponential_total: JsonComplex,
    total: JsonComplex,
    remainder_estimate: String,
    oracle: Option<OracleReport>,
    oracle_error: Option<String>,
    #[serde(rename = "S_diff_abs")]
    s_diff_abs: Option<String>,
    abs_difference: Option<String>,
}

pub fn cmd_eval(args: &EvalArgs) -> Result<Output, Failure> {
    let p = rational("p", &args.p)?;
    let w = rational("w", &args.w)?;
    let (are, aim) = complex(&args.a)?;
    let budget = max_terms()?;
    let ctx = PrecisionCtx::new(args.digits);
    let d = ctx.working_digits();
    let params: Params<BigReal> = Params::from_rationals(p, w, &are, &aim, ctx)?;
    let truncation = match args.count {
        Some(0) => return Err(Failure::invalid("--count must be at least 1")),
        Some(m) => Truncation::Fixed(m),
        None => Truncation::Optimal,
    };
    let ev = evaluate(
        &params,
        &EvalOptions {
            truncation,
            ..EvalOptions::default()
        },
    )?;
    let tol = ctx.tolerance::<BigReal>() / BigReal::from_int_ctx(1000, &ctx);
    let opts = OracleOptions {
        max_terms: budget,
        alternating: false,
    };
    let oracle = direct_sum_with(&params.p, &params.w, &params.a, &ctx, &tol, opts);
    let (oracle_report, oracle_error, s_diff_abs, abs_difference, code) = match &oracle {
        Ok(o) => (
            Some(OracleReport {
                value: cdec(&o.value, d),
                tail_bound: dec(&o.tail_bound, d),
                terms_used: o.terms_used,
            }),
            None,
            Some(dec(&ComplexExt::abs(&(o.value.clone() - ev.algebraic.sum.clone())), d)),
            Some(dec(&ComplexExt::abs(&(o.value.clone() - ev.total.clone())), d)),
            EXIT_OK,
        ),
        Err(e) => (None, Some(e.to_string()), None, None, exit_code(e)),
    };
    let report = EvalReport {
        p: params.p.to_string(),
        w: params.w.to_string(),
        a: cdec(&params.a, d),
        digits: d,
        regime: ev.regime.name(),
        double_pole: ev.double_pole,
        algebraic: AlgebraicReport {
            j_term: cdec(&ev.algebraic.j_term, d),
            sum: cdec(&ev.algebraic.sum, d),
            terms: ev.algebraic.terms.len(),
            cutoff: ev.algebraic.cutoff,
            remainder_estimate: dec(&ev.algebraic.remainder_estimate, d),
        },
        exponential: ev
            .exponential
            .iter()
            .map(|e| ExpansionReport {
                r: e.r,
                hat: e.hat,
                psi: e.psi.to_string(),
                j0: e.j0(),
                least_index: e.least_index,
                least_term: e.least_term().map(|x| dec(&x, d)),
                leading_term: e.leading_magnitude().map(|x| dec(&x, d)),
                included: e.included,
                sum: cdec(&e.sum, d),
                remainder_estimate: dec(&e.remainder_estimate, d),
            })
            .collect(),
        exponential_total: cdec(&ev.exponential_total, d),
        total: cdec(&ev.total, d),
        remainder_estimate: dec(&ev.remainder_estimate, d),
        oracle: oracle_report,
        oracle_error,
        s_diff_abs,
        abs_difference,
    };
    let text = match args.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")),
        f => {
            let mut g = Grid::new(&["quantity", "value"]);
            let v = serde_json::to_value(&report).expect("serializable");
            flatten("", &v, &mut g);
            render(&g, f, Grid::to_json)
        }
    };
    Ok(Output { text, code })
}

/// Dotted-path rows for the tabular forms of a JSON report.
fn flatten(prefix: &str, v: &serde_json::Value, g: &mut Grid) {
    use serde_json::Value;
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, g)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, g)),
        Value::String(s) => g.push(vec![prefix.to_string(), s.clone()]),
        Value::Null => g.push(vec![prefix.to_string(), "-".into()]),
        other => g.push(vec![prefix.to_string(), other.to_string()]),
    }
}

fn reject_a(cmd: &str, a: &Option<String>) -> Result<(), Failure> {
    match a {
        Some(_) => Err(Failure::invalid(format!(
            "--a is only accepted by eval and verify, not {cmd}"
        ))),
        None => Ok(()),
    }
}

/// Digits shown for coefficients, as in the printed table.
const COEFF_DIGITS: usize = 7;
/// Digits shown for error magnitudes.
const ERROR_DIGITS: usize = 4;

pub fn cmd_coeffs(args: &CoeffsArgs) -> Result<Output, Failure> {
    reject_a("coeffs", &args.a)?;
    let p = rational("p", &args.p)?;
    let w = rational("w", &args.w)?;
    if args.count == 0 {
        return Err(Failure::invalid("--count must be at least 1"));
    }
    let table = expansion_coefficients(&p, &w, args.count + 1)?;
    let ctx = PrecisionCtx::new(args.digits);
    let like = BigReal::from_int_ctx(0, &ctx);
    let reals = table.to_real(&like);
    let mut g = Grid::new(&["j", "c_j", "value", "exact"]);
    for j in 1..=args.count {
        g.push(vec![
            j.to_string(),
            format_paper(&reals[j], COEFF_DIGITS, ExpStyle::Plain),
            dec(&reals[j], ctx.working_digits()),
            table.c[j].to_string(),
        ]);
    }
    Ok(Output::ok(render(&g, args.format, |g| {
        serde_json::json!({ "p": p.to_string(), "w": w.to_string(), "coefficients": g.to_json() })
    })))
}

fn paper(x: &BigReal) -> String {
    format_paper(x, ERROR_DIGITS, ExpStyle::Padded)
}

fn opt_paper(x: Option<BigReal>) -> String {
    x.map(|v| paper(&v)).unwrap_or_else(|| "-".into())
}

pub const TABLE2_HEADERS: [&str; 6] = ["p", "w", "a", "abs_S", "abs_S_minus_E0", "j0"];
pub const TABLE3_HEADERS: [&str; 7] = [
    "a",
    "abs_S",
    "abs_S_minus_E0",
    "j0",
    "abs_S_minus_E01",
    "min_abs_E0",
    "E1_j0",
];

pub fn cmd_table(args: &TableArgs) -> Result<Output, Failure> {
    reject_a("table", &args.a)?;
    if args.p.is_some() || args.w.is_some() {
        return Err(Failure::invalid("table uses fixed parameter grids; --p and --w are not accepted"));
    }
    let budget = max_terms()?;
    let mut notes = Vec::new();
    let mut code = EXIT_OK;
    let mut note_error = |label: String, e: &Error| {
        code = code.max(exit_code(e));
        notes.push(format!("{label}: {e}"));
    };
    let grid = match args.id {
        1 => {
            let rows = table1(TABLE1_COUNT)?;
            let headers: Vec<String> = std::iter::once("j".to_string())
                .chain(TABLE1_PARAMS.iter().map(|(p, w)| format!("p{p}_w{w}")))
                .collect();
            let like = BigReal::from_int_ctx(0, &PrecisionCtx::new(args.digits));
            let cols: Vec<Vec<BigReal>> = rows.iter().map(|t| t.to_real(&like)).collect();
            let mut g = Grid {
                headers,
                rows: Vec::new(),
            };
            for j in 0..TABLE1_COUNT {
                let mut r = vec![(j + 1).to_string()];
                r.extend(cols.iter().map(|c| format_paper(&c[j], COEFF_DIGITS, ExpStyle::Plain)));
                g.push(r);
            }
            g
        }
        2 => {
            let rows: Vec<_> = TABLE2_ROWS
                .par_iter()
                .map(|&(p, w, a)| expansion_row(p, w, a, args.digits, budget))
                .collect();
            let mut g = Grid::new(&TABLE2_HEADERS);
            for (&(p, w, a), row) in TABLE2_ROWS.iter().zip(rows) {
                let mut cells = vec![p.to_string(), w.to_string(), a.to_string()];
                match row {
                    Ok(r) => cells.extend([paper(&r.abs_s()), paper(&r.abs_s_minus_e0()), r.j0().to_string()]),
                    Err(e) => {
                        note_error(format!("p={p} w={w} a={a}"), &e);
                        cells.extend(["error"; 3].map(String::from));
                    }
                }
                g.push(cells);
            }
            g
        }
        3 => {
            let rows: Vec<_> = TABLE3_A
                .par_iter()
                .map(|a| expansion_row(TABLE3_P, TABLE3_W, a, args.digits, budget))
                .collect();
            let mut g = Grid::new(&TABLE3_HEADERS);
            for (a, row) in TABLE3_A.iter().zip(rows) {
                match row {
                    Ok(r) => g.push(table3_cells(a, &r)),
                    Err(e) => {
                        note_error(format!("p={TABLE3_P} w={TABLE3_W} a={a}"), &e);
                        let mut cells = vec![a.to_string()];
                        cells.extend(["error"; 6].map(String::from));
                        g.push(cells);
                    }
                }
            }
            g
        }
        _ => return Err(Failure::invalid("--id must be 1, 2 or 3")),
    };
    let mut text = render(&grid, args.format, |g| {
        serde_json::json!({ "table": args.id, "rows": g.to_json(), "notes": notes })
    });
    if args.format == Format::Markdown {
        for n in &notes {
            text.push_str(&format!("\nnote: {n}\n"));
        }
    }
    for n in &notes {
        eprintln!("note: {n}");
    }
    Ok(Output { text, code })
}

fn table3_cells(a: &str, r: &ExpansionRow) -> Vec<String> {
    vec![
        a.to_string(),
        paper(&r.abs_s()),
        paper(&r.abs_s_minus_e0()),
        r.j0().to_string(),
        opt_paper(r.abs_s_minus_e01()),
        opt_paper(r.min_e0()),
        opt_paper(r.e1_leading()),
    ]
}

#[derive(Serialize, Debug)]
pub struct VerifyCase {
    pub case: String,
    pub residual: String,
    pub pass: bool,
}

#[derive(Serialize, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub digits: u32,
    pub threshold: String,
    pub pass: bool,
    pub max_residual: String,
    pub cases: Vec<VerifyCase>,
}

fn real_a(ctx: &PrecisionCtx, (re, im): &(BigRational, BigRational)) -> BigComplex {
    Complex::new(BigReal::from_rational_ctx(re, ctx), BigReal::from_rational_ctx(im, ctx))
}

/// `|x - y| / max(|y|, 1)`.
fn relative(x: &BigReal, y: &BigReal) -> BigReal {
    let scale = y.abs().max_of(y.integer(1));
    (x.clone() - y.clone()).abs() / scale
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Output, Failure> {
    let ctx = PrecisionCtx::new(args.digits);
    let budget = max_terms()?;
    let a_given = args.a.as_deref().map(complex).transpose()?;
    let p_given = args.p.as_deref().map(|s| rational("p", s)).transpose()?;
    let w_given = args.w.as_deref().map(|s| rational("w", s)).transpose()?;
    let q = |s: &str| rational("internal", s).expect("literal");
    let r = |x: &str| BigReal::from_rational_ctx(&q(x), &ctx);
    let one = BigReal::from_int_ctx(1, &ctx);
    let mut cases: Vec<(String, BigReal)> = Vec::new();
    match args.suite {
        Suite::Pj => {
            let pi = BigReal::pi_ctx(&ctx);
            let points: Vec<(String, BigComplex)> = match &a_given {
                Some(a) => vec![(args.a.clone().unwrap_or_default(), real_a(&ctx, a))],
                None => vec![
                    ("0.3".into(), Complex::new(r("0.3"), r("0"))),
                    ("1".into(), Complex::new(r("1"), r("0"))),
                    ("3".into(), Complex::new(r("3"), r("0"))),
                    ("pi".into(), Complex::new(pi, r("0"))),
                    ("1+0.8i".into(), Complex::new(r("1"), r("0.8"))),
                    ("2-i".into(), Complex::new(r("2"), r("-1"))),
                ],
            };
            for (label, a) in points {
                cases.push((format!("a={label}"), poisson_jacobi_residual(&a, &ctx, budget)?));
            }
        }
        Suite::Alt => {
            let draws: Vec<(BigRational, BigRational, String)> = match (&p_given, &w_given) {
                (Some(p), Some(w)) => vec![(p.clone(), w.clone(), args.a.clone().unwrap_or_else(|| "1".into()))],
                (None, None) => [("2", "2", "1"), ("4", "4", "0.5"), ("1", "0", "1"), ("3", "1.5", "0.7"), ("0.75", "2", "1+0.5i")]
                    .iter()
                    .map(|(p, w, a)| (q(p), q(w), a.to_string()))
                    .collect(),
                _ => return Err(Failure::invalid("alt needs both --p and --w, or neither")),
            };
            for (p, w, a) in draws {
                let av = real_a(&ctx, &complex(&a)?);
                cases.push((format!("p={p} w={w} a={a}"), alternating_residual(&p, &w, &av, &ctx, budget)?));
            }
        }
        Suite::Zeta => {
            let two_pi = BigReal::pi_ctx(&ctx) * BigReal::from_int_ctx(2, &ctx);
            for s in ["-7.5", "-2.5", "0.5", "2.5", "3.7", "10.1"] {
                let sv = r(s);
                let lhs = riemann_zeta(&(one.clone() - sv.clone()), &ctx)?;
                let half = BigReal::pi_ctx(&ctx) * sv.clone() / BigReal::from_int_ctx(2, &ctx);
                let rhs = BigReal::from_int_ctx(2, &ctx) * two_pi.powf(&-sv.clone()) * half.cos()
                    * gamma(&sv, &ctx)?
                    * riemann_zeta(&sv, &ctx)?;
                cases.push((format!("functional equation s={s}"), relative(&lhs, &rhs)));
            }
            for k in 1..=10u64 {
                let want = -bernoulli(2 * k as usize) / BigRational::from_integer((2 * k).into());
                let exact = zeta_nonpositive_int(2 * k - 1);
                let numeric = riemann_zeta(&BigReal::from_int_ctx(1 - 2 * k as i64, &ctx), &ctx)?;
                let wv = BigReal::from_rational_ctx(&want, &ctx);
                let mismatch = BigReal::from_int_ctx(i64::from(exact != want), &ctx);
                let res = relative(&numeric, &wv) + mismatch;
                cases.push((format!("zeta({}) = -B_{}/{}", 1 - 2 * k as i64, 2 * k, 2 * k), res));
            }
        }
        Suite::Gamma => {
            for x in ["0.3", "1.7", "5.5", "12.25", "-2.5", "40.125"] {
                let xv = r(x);
                let lhs = gamma(&(xv.clone() + one.clone()), &ctx)?;
                let rhs = xv.clone() * gamma(&xv, &ctx)?;
                cases.push((format!("recurrence x={x}"), relative(&lhs, &rhs)));
            }
            for x in ["0.1", "0.25", "0.7"] {
                let xv = r(x);
                let pi = BigReal::pi_ctx(&ctx);
                let lhs = gamma(&xv, &ctx)? * gamma(&(one.clone() - xv.clone()), &ctx)?;
                let rhs = pi.clone() / (pi * xv).sin();
                cases.push((format!("reflection x={x}"), relative(&lhs, &rhs)));
            }
        }
        Suite::Thm12 => {
            if args.count == 0 {
                return Err(Failure::invalid("--count must be at least 1"));
            }
            let pws: Vec<(BigRational, BigRational)> = match (&p_given, &w_given) {
                (Some(p), Some(w)) => vec![(p.clone(), w.clone())],
                (None, None) => [("2", "2"), ("4", "2"), ("4", "4"), ("6", "2")].iter().map(|(p, w)| (q(p), q(w))).collect(),
                _ => return Err(Failure::invalid("thm12 needs both --p and --w, or neither")),
            };
            let avals: Vec<(BigRational, BigRational)> = match &a_given {
                Some(a) => vec![a.clone()],
                None => vec![(q("0.1"), q("0")), (q("0.01"), q("0"))],
            };
            for (p, w) in &pws {
                for a in &avals {
                    let params: Params<BigReal> = Params::from_rationals(p.clone(), w.clone(), &a.0, &a.1, ctx)?;
                    let t1 = theorem1_exponential(&params, args.count)?;
                    let t2 = theorem2_exponential(&params, args.count, None)?;
                    let zero = BigReal::from_int_ctx(0, &ctx);
                    let mut diff = Complex::new(zero.clone(), zero.clone());
                    let mut scale = zero;
                    for (e1, e2) in t1.iter().zip(&t2) {
                        diff = diff + e1.sum.clone() - e2.sum.clone();
                        scale = scale.max_of(e1.terms[0].magnitude.clone());
                    }
                    cases.push((format!("p={p} w={w} a={}", a.0), ComplexExt::abs(&diff) / scale));
                }
            }
        }
    }
    let (report, code) = verify_report(&format!("{:?}", args.suite).to_lowercase(), &ctx, &cases);
    let text = match args.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")),
        f => {
            let mut g = Grid::new(&["case", "residual", "pass"]);
            for c in &report.cases {
                g.push(vec![c.case.clone(), c.residual.clone(), c.pass.to_string()]);
            }
            render(&g, f, Grid::to_json)
        }
    };
    Ok(Output { text, code })
}

/// Pass/fail verdict against the threshold `10^-(digits - 5)`.
pub fn verify_report(suite: &str, ctx: &PrecisionCtx, cases: &[(String, BigReal)]) -> (VerifyReport, u8) {
    let d = ctx.working_digits();
    let threshold = BigReal::from_int_ctx(10, ctx).powi(-(d as i32 - 5));
    let zero = BigReal::from_int_ctx(0, ctx);
    let max = cases.iter().fold(zero, |m, (_, r)| m.max_of(r.clone()));
    let pass = cases.iter().all(|(_, r)| *r < threshold);
    let report = VerifyReport {
        suite: suite.to_string(),
        digits: d,
        threshold: dec(&threshold, 3),
        pass,
        max_residual: dec(&max, 6),
        cases: cases
            .iter()
            .map(|(c, r)| VerifyCase {
                case: c.clone(),
                residual: dec(r, 6),
                pass: *r < threshold,
            })
            .collect(),
    };
    (report, if pass { EXIT_OK } else { EXIT_VERIFY })
}
