//! Parameter grids and row computations for the coefficient and error tables.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::bigreal::BigReal;
use crate::coeffgen::{expansion_coefficients, CoefficientTable};
use crate::error::{Error, Result};
use crate::expansions::{algebraic_part, evaluate, EvalOptions, Expansion, Truncation};
use crate::format::parse_decimal;
use crate::oracle::{direct_sum_with, OracleOptions};
use crate::params::Params;
use crate::scalar::{rat_int, ComplexExt, PrecisionCtx, Real};

/// `(p, w)` pairs of the coefficient table, each listing `c_1 .. c_8`.
pub const TABLE1_PARAMS: [(i64, i64); 4] = [(4, 2), (4, 4), (6, 2), (6, 4)];

/// `(p, w, a)` rows of the error table for `E_0` alone.
pub const TABLE2_ROWS: [(i64, i64, &str); 20] = [
    (2, 2, "1.00"),
    (2, 2, "0.75"),
    (2, 2, "0.50"),
    (2, 2, "0.20"),
    (2, 2, "0.10"),
    (2, 4, "1.00"),
    (2, 4, "0.75"),
    (2, 4, "0.50"),
    (2, 4, "0.20"),
    (2, 4, "0.10"),
    (4, 2, "0.200"),
    (4, 2, "0.100"),
    (4, 2, "0.050"),
    (4, 2, "0.010"),
    (4, 2, "0.001"),
    (4, 4, "0.200"),
    (4, 4, "0.100"),
    (4, 4, "0.050"),
    (4, 4, "0.010"),
    (4, 4, "0.001"),
];

/// Values of `a` in the table for `p = 6`, `w = 2`.
pub const TABLE3_A: [&str; 7] = ["0.1", "0.05", "0.01", "0.005", "0.001", "1e-4", "1e-5"];
pub const TABLE3_P: i64 = 6;
pub const TABLE3_W: i64 = 2;

/// Number of coefficients listed per row of the coefficient table.
pub const TABLE1_COUNT: usize = 8;

/// `c_1 .. c_count` for every row of the coefficient table.
pub fn table1(count: usize) -> Result<Vec<CoefficientTable>> {
    TABLE1_PARAMS
        .iter()
        .map(|&(p, w)| {
            let mut t = expansion_coefficients(&rat_int(p), &rat_int(w), count + 1)?;
            t.c.remove(0);
            Ok(t)
        })
        .collect()
}

/// `|X|` in double precision.
pub fn x_estimate(p: f64, a: f64) -> f64 {
    let kappa = p - 1.0;
    let h = p.powf(-p);
    let chi = (2.0 * std::f64::consts::PI).powf(p) / a;
    kappa * (h * chi).powf(1.0 / kappa)
}

/// Working digits for a row: the smallest errors are about `e^{-2X}`, and
/// they are resolved against values of order one.
pub fn table_digits(p: f64, a: f64) -> u32 {
    let x = x_estimate(p, a);
    let expected = 2.0 * x / std::f64::consts::LN_10;
    (1.3 * expected + 20.0).ceil().max(30.0) as u32
}

/// Everything needed for one row of the error tables.
#[derive(Clone, Debug)]
pub struct ExpansionRow {
    pub p: BigRational,
    pub w: BigRational,
    pub a: BigRational,
    pub digits: u32,
    /// `S - J - sum_k`, the exponentially small remainder.
    pub s_diff: Complex<BigReal>,
    pub e0: Expansion<BigReal>,
    /// Second expansion (`hat E_1` for `p = 6`) when it exists.
    pub e1: Option<Expansion<BigReal>>,
    pub oracle_terms: u64,
}

impl ExpansionRow {
    pub fn abs_s(&self) -> BigReal {
        ComplexExt::abs(&self.s_diff)
    }

    pub fn j0(&self) -> usize {
        self.e0.j0().unwrap_or(0)
    }

    /// `|s_diff - E_0|` with `E_0` summed over `j < count`.
    pub fn abs_s_minus_e0_at(&self, count: usize) -> BigReal {
        ComplexExt::abs(&(self.s_diff.clone() - self.e0.partial_sum(count)))
    }

    pub fn abs_s_minus_e0(&self) -> BigReal {
        self.abs_s_minus_e0_at(self.e0.retained)
    }

    /// `|s_diff - E_0 - E_1|` with both summed over `j < count`.
    pub fn abs_s_minus_e01_at(&self, count: usize) -> Option<BigReal> {
        let e1 = self.e1.as_ref()?;
        let d = self.s_diff.clone() - self.e0.partial_sum(count) - e1.partial_sum(count);
        Some(ComplexExt::abs(&d))
    }

    /// `|s_diff - E_0 - E_1|` at the optimal truncation, or `None` when the
    /// second expansion was dropped.
    pub fn abs_s_minus_e01(&self) -> Option<BigReal> {
        match &self.e1 {
            Some(e1) if e1.included => self.abs_s_minus_e01_at(e1.retained),
            _ => None,
        }
    }

    /// Least term of `E_0` (single branch).
    pub fn min_e0(&self) -> Option<BigReal> {
        self.e0.least_term()
    }

    /// Magnitude of the leading term of the second expansion.
    pub fn e1_leading(&self) -> Option<BigReal> {
        self.e1.as_ref().and_then(|e| e.leading_magnitude())
    }
}

/// Computes one row at `a` (a decimal string), using at least `min_digits`
/// working digits and at most `max_terms` oracle terms.
pub fn expansion_row(p: i64, w: i64, a: &str, min_digits: u32, max_terms: u64) -> Result<ExpansionRow> {
    let a_rat = parse_decimal(a)?;
    let a_f = a_rat
        .to_f64()
        .filter(|x| *x > 0.0)
        .ok_or_else(|| Error::InvalidInput(format!("a = {a} must be positive")))?;
    let digits = table_digits(p as f64, a_f).max(min_digits);
    let ctx = PrecisionCtx::new(digits);
    let params: Params<BigReal> =
        Params::from_rationals(rat_int(p), rat_int(w), &a_rat, &BigRational::zero(), ctx)?;
    let tol = ctx.tolerance::<BigReal>() / BigReal::from_int_ctx(1000, &ctx);
    let opts = OracleOptions {
        max_terms,
        alternating: false,
    };
    let oracle = direct_sum_with(&params.p, &params.w, &params.a, &ctx, &tol, opts)?;
    let alg = algebraic_part(&params, 0)?;
    let s_diff = oracle.value - alg.sum;
    let ev = evaluate(
        &params,
        &EvalOptions {
            truncation: Truncation::Optimal,
            ..EvalOptions::default()
        },
    )?;
    let mut exps = ev.exponential.into_iter();
    let e0 = exps
        .next()
        .ok_or_else(|| Error::Regime("no exponentially small expansion".into()))?;
    let e1 = exps.next();
    Ok(ExpansionRow {
        p: params.p,
        w: params.w,
        a: a_rat,
        digits,
        s_diff,
        e0,
        e1,
        oracle_terms: oracle.terms_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_grow_as_a_shrinks() {
        assert!(table_digits(2.0, 0.1) >= 130);
        assert!(table_digits(2.0, 1.0) < table_digits(2.0, 0.5));
        assert!((x_estimate(2.0, 1.0) - std::f64::consts::PI.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn first_row() {
        let r = expansion_row(2, 2, "1.00", 0, 1_000_000).unwrap();
        assert_eq!(r.j0(), 8);
        assert!((r.abs_s().to_f64() / 8.146e-6 - 1.0).abs() < 5e-4);
        assert!((r.abs_s_minus_e0().to_f64() / 6.637e-9 - 1.0).abs() < 5e-4);
        assert!(r.e1.is_none());
    }

    #[test]
    fn coefficient_rows() {
        let t = table1(TABLE1_COUNT).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.iter().all(|r| r.len() == 8));
        let c1 = t[0].c[0].to_f64().unwrap();
        assert!((c1 - 1.3958333333333333).abs() < 1e-15);
    }
}
