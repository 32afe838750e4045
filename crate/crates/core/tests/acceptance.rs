//! Acceptance suite: eight criteria, one line each.
//!
//! Run with `cargo test -p ejasym-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ejasym_core::coeffgen::{c1_polynomial, c2_polynomial, closed_form_p2, coefficients_in};
use ejasym_core::expansions::{
    algebraic_part, negative_w_expansion, theorem1_exponential, theorem2_exponential,
};
use ejasym_core::format::{decimal_digits, parse_paper, rel_diff};
use ejasym_core::oracle::{alternating_residual, direct_sum, poisson_jacobi_residual, DEFAULT_MAX_TERMS};
use ejasym_core::params::Params;
use ejasym_core::tables::{expansion_row, table1, ExpansionRow, TABLE1_COUNT, TABLE3_P, TABLE3_W};
use ejasym_core::{BigReal, ComplexExt, PrecisionCtx, Real};

/// Three significant figures.
const REL_3SF: f64 = 5e-3;
const J0_WINDOW: usize = 1;
const TABLE1_LIMIT: Duration = Duration::from_secs(60);
const COEFF_LIMIT: Duration = Duration::from_secs(60);
const TABLE2_LIMIT: Duration = Duration::from_secs(600);
const PJ_DIGITS: u32 = 50;
const CONVERGENT_TOL: f64 = 1e-30;
const ORDER_FACTOR: f64 = 3.0;
const BR_FACTOR: f64 = 10.0;
const THM_DIGITS: u32 = 60;
const THM_TERMS: usize = 8;
const ALT_DIGITS: u32 = 40;

const TABLE1: [(i64, i64, [&str; 8]); 4] = [
    (4, 2, ["1.395833(0)", "3.495009(0)", "1.230179(1)", "5.555372(1)", "3.060544(2)", "1.990604(3)", "1.493190(4)", "1.269216(5)"]),
    (4, 4, ["3.645833(0)", "1.648980(1)", "9.075366(1)", "5.899040(2)", "4.424055(3)", "3.760330(4)", "3.572267(5)", "3.750863(6)"]),
    (6, 2, ["1.472222(0)", "3.861497(0)", "1.380091(1)", "6.207979(1)", "3.387328(2)", "2.188492(3)", "1.639364(4)", "1.396172(5)"]),
    (6, 4, ["3.305556(0)", "1.469946(1)", "8.081628(1)", "5.260968(2)", "3.949570(3)", "3.358058(4)", "3.189927(5)", "3.348999(6)"]),
];

/// `(p, w, a, |S|, |S - E_0|, j0)`.
const TABLE2: [(i64, i64, &str, &str, &str, usize); 20] = [
    (2, 2, "1.00", "8.146(-06)", "6.637(-09)", 8),
    (2, 2, "0.75", "2.031(-07)", "8.089(-12)", 11),
    (2, 2, "0.50", "1.584(-10)", "1.260(-17)", 18),
    (2, 2, "0.20", "5.774(-24)", "1.542(-43)", 47),
    (2, 2, "0.10", "7.667(-46)", "1.486(-86)", 97),
    (2, 4, "1.00", "6.252(-07)", "3.642(-08)", 6),
    (2, 4, "0.75", "9.296(-09)", "4.659(-11)", 9),
    (2, 4, "0.50", "3.437(-12)", "7.635(-17)", 16),
    (2, 4, "0.20", "2.189(-26)", "9.830(-43)", 45),
    (2, 4, "0.10", "7.506(-49)", "9.631(-86)", 95),
    (4, 2, "0.200", "3.473(-03)", "1.329(-06)", 7),
    (4, 2, "0.100", "4.863(-04)", "2.749(-08)", 11),
    (4, 2, "0.050", "2.737(-05)", "2.156(-10)", 14),
    (4, 2, "0.010", "4.221(-09)", "4.621(-17)", 23),
    (4, 2, "0.001", "1.064(-14)", "1.033(-36)", 53),
    (4, 4, "0.200", "3.919(-04)", "8.742(-06)", 6),
    (4, 4, "0.100", "4.805(-05)", "4.879(-07)", 8),
    (4, 4, "0.050", "8.456(-06)", "1.420(-09)", 11),
    (4, 4, "0.010", "7.982(-09)", "3.041(-16)", 21),
    (4, 4, "0.001", "1.876(-16)", "6.799(-36)", 51),
];

/// `(a, |S|, |S - E_0|, j0, |S - E_01|, Min|E_0|, E_1(j=0))`.
const TABLE3: [(&str, &str, &str, usize, Option<&str>, &str, &str); 7] = [
    ("0.1", "2.935(-02)", "3.780(-05)", 6, None, "9.422(-05)", "5.095(-05)"),
    ("0.05", "1.617(-03)", "3.037(-05)", 8, Some("1.200(-05)"), "1.729(-05)", "1.191(-05)"),
    ("0.01", "9.512(-04)", "1.193(-07)", 12, Some("5.339(-08)"), "1.228(-07)", "1.904(-07)"),
    ("0.005", "1.292(-03)", "1.099(-08)", 13, Some("8.713(-09)"), "9.090(-09)", "2.148(-08)"),
    ("0.001", "1.604(-04)", "3.452(-11)", 19, Some("3.483(-12)"), "3.757(-12)", "4.053(-11)"),
    ("1e-4", "9.894(-07)", "8.801(-17)", 31, Some("2.230(-19)"), "3.024(-19)", "9.201(-17)"),
    ("1e-5", "6.209(-10)", "1.522(-25)", 51, Some("1.963(-30)"), "1.964(-30)", "1.564(-25)"),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn printed(s: &str) -> f64 {
    parse_paper(s).expect("well-formed table entry")
}

fn close(x: &BigReal, want: &str) -> bool {
    rel_diff(x.to_f64(), printed(want)) <= REL_3SF
}

/// True if some truncation within the window around `j0` reproduces `want`.
fn close_in_window(j0: usize, want: &str, value_at: impl Fn(usize) -> Option<BigReal>) -> bool {
    let lo = j0.saturating_sub(J0_WINDOW);
    (lo..=j0 + J0_WINDOW).any(|j| value_at(j).is_some_and(|v| close(&v, want)))
}

fn rows_concurrently<I: Sync, R: Send>(inputs: &[I], f: impl Fn(&I) -> R + Sync) -> Vec<R> {
    std::thread::scope(|s| {
        let handles: Vec<_> = inputs.iter().map(|i| s.spawn(|| f(i))).collect();
        handles.into_iter().map(|h| h.join().expect("row panicked")).collect()
    })
}

fn criterion_table1() -> Outcome {
    let start = Instant::now();
    let rows = match table1(TABLE1_COUNT) {
        Ok(r) => r,
        Err(e) => return Outcome { pass: false, detail: e.to_string() },
    };
    let elapsed = start.elapsed();
    let ctx = PrecisionCtx::new(30);
    let like = BigReal::from_int_ctx(0, &ctx);
    let mut bad = Vec::new();
    for ((p, w, want), row) in TABLE1.iter().zip(&rows) {
        for (j, (s, c)) in want.iter().zip(row.to_real(&like)).enumerate() {
            let (_, m, e) = decimal_digits(&c, 7).expect("nonzero coefficient");
            let got = format!("{}.{}({e})", &m[..1], &m[1..]);
            if got != *s {
                bad.push(format!("(p={p}, w={w}) c_{} = {got}, printed {s}", j + 1));
            }
        }
    }
    let pass = bad.is_empty() && elapsed < TABLE1_LIMIT;
    Outcome {
        pass,
        detail: format!("32 entries, {} mismatched {:?}, {:.1?}", bad.len(), bad, elapsed),
    }
}

fn random_rational(rng: &mut StdRng, lo: i64, hi: i64) -> BigRational {
    let den = rng.gen_range(1..=12i64);
    let num = rng.gen_range(lo * den..=hi * den);
    BigRational::new(num.into(), den.into())
}

fn criterion_polynomials() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut bad = Vec::new();
    for _ in 0..20 {
        let p = BigRational::from_integer(1.into()) + random_rational(&mut rng, 0, 6);
        if p == BigRational::from_integer(1.into()) {
            continue;
        }
        let w = random_rational(&mut rng, -4, 6);
        let c = coefficients_in(&p, &w, 3).expect("coefficients");
        if c[1] != c1_polynomial(&p, &w) || c[2] != c2_polynomial(&p, &w) {
            bad.push(format!("(p={p}, w={w})"));
        }
    }
    let two = BigRational::from_integer(2.into());
    for w in ["2", "4", "7/3", "-1/2"] {
        let w: BigRational = w.parse().expect("rational");
        let general = coefficients_in(&two, &w, 51).expect("coefficients");
        if general != closed_form_p2(&w, 51).c {
            bad.push(format!("p=2 closed form at w={w}"));
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: bad.is_empty() && elapsed < COEFF_LIMIT,
        detail: format!("20 random (p, w) and 4 closed-form checks, failures {bad:?}, {elapsed:.1?}"),
    }
}

fn criterion_table2() -> Outcome {
    let start = Instant::now();
    let rows = rows_concurrently(&TABLE2, |&(p, w, a, ..)| expansion_row(p, w, a, 0, DEFAULT_MAX_TERMS));
    let elapsed = start.elapsed();
    let mut bad = Vec::new();
    for ((p, w, a, s, se0, j0), row) in TABLE2.iter().zip(rows) {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                bad.push(format!("({p},{w},{a}): {e}"));
                continue;
            }
        };
        let mut why = Vec::new();
        if !close(&row.abs_s(), s) {
            why.push(format!("|S| = {:.4e}", row.abs_s().to_f64()));
        }
        if !close_in_window(*j0, se0, |j| Some(row.abs_s_minus_e0_at(j + 1))) {
            why.push(format!("|S-E0| = {:.4e}", row.abs_s_minus_e0().to_f64()));
        }
        if row.j0().abs_diff(*j0) > J0_WINDOW {
            why.push(format!("j0 = {}", row.j0()));
        }
        if !why.is_empty() {
            bad.push(format!("({p},{w},{a}): {}", why.join(", ")));
        }
    }
    Outcome {
        pass: bad.is_empty() && elapsed < TABLE2_LIMIT,
        detail: format!("20 rows, failures {bad:?}, {elapsed:.1?}"),
    }
}

fn check_table3_row(
    row: &ExpansionRow,
    (_, s, se0, j0, se01, min_e0, e1): &(&str, &str, &str, usize, Option<&str>, &str, &str),
) -> Vec<String> {
    let mut why = Vec::new();
    if !close(&row.abs_s(), s) {
        why.push(format!("|S| = {:.4e}", row.abs_s().to_f64()));
    }
    if !close_in_window(*j0, se0, |j| Some(row.abs_s_minus_e0_at(j + 1))) {
        why.push(format!("|S-E0| = {:.4e}", row.abs_s_minus_e0().to_f64()));
    }
    if row.j0().abs_diff(*j0) > J0_WINDOW {
        why.push(format!("j0 = {}", row.j0()));
    }
    if let Some(want) = se01 {
        if !close_in_window(*j0, want, |j| row.abs_s_minus_e01_at(j + 1)) {
            let got = row.abs_s_minus_e01_at(row.e0.retained).map(|v| v.to_f64());
            why.push(format!("|S-E01| = {got:?}"));
        }
    }
    let least = |j: usize| row.e0.branch_magnitudes.get(j + 1).cloned();
    if !close_in_window(*j0, min_e0, least) {
        why.push(format!("Min|E0| = {:?}", row.min_e0().map(|v| v.to_f64())));
    }
    match row.e1_leading() {
        Some(v) if close(&v, e1) => {}
        other => why.push(format!("E1(j=0) = {:?}", other.map(|v| v.to_f64()))),
    }
    why
}

fn criterion_table3() -> Outcome {
    let start = Instant::now();
    let rows = rows_concurrently(&TABLE3, |r| expansion_row(TABLE3_P, TABLE3_W, r.0, 0, DEFAULT_MAX_TERMS));
    let mut bad = Vec::new();
    for (want, row) in TABLE3.iter().zip(rows) {
        let why = match row {
            Ok(row) => check_table3_row(&row, want),
            Err(e) => vec![e.to_string()],
        };
        if !why.is_empty() {
            bad.push(format!("a={}: {}", want.0, why.join(", ")));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("7 rows, failures {bad:?}, {:.1?}", start.elapsed()),
    }
}

fn criterion_poisson_jacobi() -> Outcome {
    let ctx = PrecisionCtx::new(PJ_DIGITS);
    let pi = BigReal::pi_ctx(&ctx);
    let r = |x: f64| BigReal::from_f64_ctx(x, &ctx);
    let points = [
        Complex::new(r(0.3), r(0.0)),
        Complex::new(r(1.0), r(0.0)),
        Complex::new(r(3.0), r(0.0)),
        Complex::new(pi, r(0.0)),
        Complex::new(r(1.0), r(0.8)),
        Complex::new(r(2.0), r(-1.0)),
    ];
    let limit = -((PJ_DIGITS - 5) as f64);
    let mut worst = f64::NEG_INFINITY;
    let mut pass = true;
    for a in &points {
        match poisson_jacobi_residual(a, &ctx, DEFAULT_MAX_TERMS) {
            Ok(res) => {
                let l = res.log10_abs();
                worst = worst.max(l);
                pass &= l < limit;
            }
            Err(_) => pass = false,
        }
    }
    Outcome {
        pass,
        detail: format!("6 points, worst log10 residual {worst:.1} (limit {limit})"),
    }
}

fn rational(s: &str) -> BigRational {
    ejasym_core::format::parse_decimal(s).expect("decimal")
}

fn real_params(p: &str, w: &str, a: &str, digits: u32) -> Params<BigReal> {
    Params::from_rationals(rational(p), rational(w), &rational(a), &BigRational::zero(), PrecisionCtx::new(digits))
        .expect("params")
}

fn convergent_check() -> (bool, String) {
    let mut worst = f64::NEG_INFINITY;
    let mut ok = true;
    for (w, a) in [("2", "1"), ("0.75", "0.5"), ("-1", "2")] {
        let params = real_params("0.5", w, a, 40);
        let tol = BigReal::from_f64_ctx(CONVERGENT_TOL, &params.ctx) / BigReal::from_int_ctx(100, &params.ctx);
        let oracle = direct_sum(&params.p, &params.w, &params.a, &params.ctx, &tol);
        let alg = algebraic_part(&params, 0);
        match (oracle, alg) {
            (Ok(o), Ok(e)) => {
                let d = ComplexExt::abs(&(o.value - e.sum)).to_f64();
                worst = worst.max(d);
                ok &= d <= CONVERGENT_TOL;
            }
            _ => ok = false,
        }
    }
    (ok, format!("p=1/2 max diff {worst:.1e}"))
}

fn order_check() -> (bool, String) {
    let n = ejasym_core::expansions::default_cutoff(&rational("3"), &rational("2")) as f64;
    let mut remainders = Vec::new();
    let mut a = 1e-2;
    while a >= 1e-4 {
        let params = real_params("3", "2", &format!("{a:e}"), 40);
        let tol = params.ctx.tolerance::<BigReal>();
        let o = direct_sum(&params.p, &params.w, &params.a, &params.ctx, &tol).expect("oracle");
        let e = algebraic_part(&params, 0).expect("algebraic part");
        remainders.push(ComplexExt::abs(&(o.value - e.sum)).to_f64());
        a /= 2.0;
    }
    let expected = 2f64.powf(n - 0.5);
    let ratios: Vec<f64> = remainders.windows(2).map(|r| r[0] / r[1] / expected).collect();
    let ok = ratios.iter().all(|r| (1.0 / ORDER_FACTOR..=ORDER_FACTOR).contains(r));
    let (lo, hi) = ratios.iter().fold((f64::MAX, f64::MIN), |(l, h), r| (l.min(*r), h.max(*r)));
    (ok, format!("p=3 w=2 N={n} ratio/2^(N-1/2) in [{lo:.2}, {hi:.2}]"))
}

fn berndt_ramanujan_check() -> (bool, String) {
    let mut ok = true;
    let mut worst = 0f64;
    for a in ["0.1", "0.01", "0.001"] {
        let ctx = PrecisionCtx::new(40);
        let av = Complex::new(BigReal::from_rational_ctx(&rational(a), &ctx), BigReal::from_int_ctx(0, &ctx));
        let e = negative_w_expansion(&rational("3"), &rational("1"), &av, None, &ctx).expect("expansion");
        let o = direct_sum(&rational("3"), &rational("-1"), &av, &ctx, &ctx.tolerance()).expect("oracle");
        let d = ComplexExt::abs(&(o.value - e.sum)).to_f64();
        let bound = BR_FACTOR * e.remainder_estimate.to_f64();
        worst = worst.max(d / e.remainder_estimate.to_f64());
        ok &= d <= bound;
    }
    (ok, format!("p=3 w=-1 max |diff|/first omitted {worst:.2}"))
}

fn criterion_regimes() -> Outcome {
    let (c1, d1) = convergent_check();
    let (c2, d2) = order_check();
    let (c3, d3) = berndt_ramanujan_check();
    Outcome {
        pass: c1 && c2 && c3,
        detail: format!("{d1}; {d2}; {d3}"),
    }
}

fn criterion_theorems() -> Outcome {
    let limit = -((THM_DIGITS - 5) as f64);
    let mut worst = f64::NEG_INFINITY;
    let mut pass = true;
    for (p, w) in [("2", "2"), ("4", "2"), ("4", "4"), ("6", "2")] {
        for a in ["0.1", "0.01"] {
            let params = real_params(p, w, a, THM_DIGITS);
            let t1 = theorem1_exponential(&params, THM_TERMS);
            let t2 = theorem2_exponential(&params, THM_TERMS, None);
            let (Ok(t1), Ok(t2)) = (t1, t2) else {
                pass = false;
                continue;
            };
            let zero = BigReal::from_int_ctx(0, &params.ctx);
            let mut s1 = Complex::new(zero.clone(), zero.clone());
            let mut s2 = Complex::new(zero.clone(), zero.clone());
            let mut scale = zero;
            for (e1, e2) in t1.iter().zip(&t2) {
                s1 = s1 + e1.sum.clone();
                s2 = s2 + e2.sum.clone();
                scale = scale.max_of(e1.terms[0].magnitude.clone());
            }
            let rel = (ComplexExt::abs(&(s1 - s2)) / scale).log10_abs();
            worst = worst.max(rel);
            pass &= rel < limit;
        }
    }
    Outcome {
        pass,
        detail: format!("8 cases with M={THM_TERMS}, worst log10 relative difference {worst:.1} (limit {limit})"),
    }
}

fn criterion_alternating() -> Outcome {
    let ctx = PrecisionCtx::new(ALT_DIGITS);
    let limit = -((ALT_DIGITS - 5) as f64);
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    let mut worst = f64::NEG_INFINITY;
    let mut pass = true;
    for _ in 0..10 {
        let p = BigRational::new(rng.gen_range(2..=16i64).into(), 4.into());
        let w = BigRational::new(rng.gen_range(-8..=16i64).into(), 4.into());
        let a_re = rng.gen_range(0.2..2.0f64);
        let a_im = rng.gen_range(-0.5..0.5f64);
        let a = Complex::new(BigReal::from_f64_ctx(a_re, &ctx), BigReal::from_f64_ctx(a_im, &ctx));
        match alternating_residual(&p, &w, &a, &ctx, DEFAULT_MAX_TERMS) {
            Ok(r) => {
                let l = r.log10_abs();
                worst = worst.max(l);
                pass &= l < limit;
            }
            Err(_) => pass = false,
        }
    }
    Outcome {
        pass,
        detail: format!("10 draws, worst log10 residual {worst:.1} (limit {limit})"),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("coefficient table", criterion_table1),
        ("coefficient polynomials and p=2 closed form", criterion_polynomials),
        ("error table for E_0", criterion_table2),
        ("error table for p=6, w=2", criterion_table3),
        ("Poisson-Jacobi identity", criterion_poisson_jacobi),
        ("regime consistency", criterion_regimes),
        ("complex and real forms agree", criterion_theorems),
        ("alternating identity", criterion_alternating),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
