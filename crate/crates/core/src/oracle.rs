//! Reference values by direct summation with a certified tail bound.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::params::check_sector;
use crate::scalar::{ComplexExt, PrecisionCtx, Real};

/// Default cap on the number of summed terms.
pub const DEFAULT_MAX_TERMS: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct OracleValue<T> {
    pub value: Complex<T>,
    /// Certified bound on `|S - value|`: the truncated tail plus an allowance
    /// for rounding in the summed terms.
    pub tail_bound: T,
    pub terms_used: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub max_terms: u64,
    /// Sum `(-1)^n e^{-a n^p} / n^w` instead.
    pub alternating: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_terms: DEFAULT_MAX_TERMS,
            alternating: false,
        }
    }
}

/// Bound on `sum_{n > n0} e^{-c n^p} n^{-w}`, or `None` when the bound
/// does not apply yet at this `n0`.
pub(crate) fn tail_bound<T: Real>(p: &T, w: &T, c: &T, n0: u64) -> Option<T> {
    let one = p.integer(1);
    let n = p.integer(n0 as i64);
    let n1 = n.clone() + one.clone();
    let n2 = n1.clone() + one.clone();
    let bound_at = |x: &T| (-(c.clone() * x.powf(p)) - w.clone() * x.ln()).exp();
    if *p >= one {
        // ratios b(n+1)/b(n) decrease in n, so the ratio at n0+1 bounds the rest
        let mut log_rho = -(c.clone() * (n2.powf(p) - n1.powf(p)));
        if w.is_negative() {
            log_rho = log_rho - w.clone() * (n2.ln() - n1.ln());
        }
        if !log_rho.is_negative() {
            return None;
        }
        let rho = log_rho.exp();
        Some(bound_at(&n1) / (one - rho))
    } else {
        // b is decreasing beyond n0 once c p n0^p > -w; compare with the integral
        if n0 == 0 {
            return None;
        }
        let x = c.clone() * n.powf(p);
        if w.is_negative() && !(x.clone() * p.clone() > -w.clone()) {
            return None;
        }
        let s = (one.clone() - w.clone()) / p.clone();
        let mut b = (n.ln() * (one.clone() - w.clone() - p.clone()) - x.clone()).exp()
            / (p.clone() * c.clone());
        if s > one {
            let excess = s - one;
            if !(x > excess) {
                return None;
            }
            b = b * x.clone() / (x - excess);
        }
        Some(b)
    }
}

/// `S_p(a; w)` (or its alternating variant) summed until the certified tail
/// bound is at most `tol`.
pub fn direct_sum_with<T: Real>(
    p: &BigRational,
    w: &BigRational,
    a: &Complex<T>,
    ctx: &PrecisionCtx,
    tol: &T,
    opts: OracleOptions,
) -> Result<OracleValue<T>> {
    if !p.is_positive() {
        return Err(Error::InvalidInput(format!("p = {p} must be positive")));
    }
    check_sector(a)?;
    if !tol.is_finite() || !(*tol > tol.integer(0)) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let zero = T::from_int_ctx(0, ctx);
    let pr = T::from_rational_ctx(p, ctx);
    let wr = T::from_rational_ctx(w, ctx);
    let a = Complex::new(a.re.clone() + zero.clone(), a.im.clone() + zero.clone());
    let c = a.re.clone();
    let mut sum = Complex::new(zero.clone(), zero.clone());
    // sum of |term| (|log term| + 10), the propagated rounding error in units of ulp
    let mut err = zero.clone();
    let mut abs_sum = zero.clone();
    let ten = zero.integer(10);
    let ulp = zero.epsilon() * zero.integer(2);
    let mut n: u64 = 0;
    loop {
        if n >= opts.max_terms {
            return Err(Error::Budget {
                max_terms: opts.max_terms,
            });
        }
        n += 1;
        let ln_n = zero.integer(n as i64).ln();
        let np = (pr.clone() * ln_n.clone()).exp();
        let log_mag = -(c.clone() * np.clone()) - wr.clone() * ln_n;
        let mag = log_mag.exp();
        err = err + mag.clone() * (log_mag.abs() + ten.clone());
        abs_sum = abs_sum + mag.clone();
        let mut term = if a.im.is_zero() {
            Complex::new(mag.clone(), zero.clone())
        } else {
            let phase = -(a.im.clone() * np);
            Complex::<T>::cis(&phase) * mag.clone()
        };
        if opts.alternating && n % 2 == 1 {
            term = -term;
        }
        sum = sum + term;
        if mag <= *tol {
            if let Some(b) = tail_bound(&pr, &wr, &c, n) {
                if b <= *tol {
                    let rounding = (err + abs_sum * zero.integer(n as i64)) * ulp;
                    return Ok(OracleValue {
                        value: sum,
                        tail_bound: b + rounding,
                        terms_used: n,
                    });
                }
            }
        }
    }
}

pub fn direct_sum<T: Real>(
    p: &BigRational,
    w: &BigRational,
    a: &Complex<T>,
    ctx: &PrecisionCtx,
    tol: &T,
) -> Result<OracleValue<T>> {
    direct_sum_with(p, w, a, ctx, tol, OracleOptions::default())
}

/// `|S_2(a; 0) - [sqrt(pi/a)/2 - 1/2 + sqrt(pi/a) sum e^{-pi^2 n^2/a}]|`.
pub fn poisson_jacobi_residual<T: Real>(a: &Complex<T>, ctx: &PrecisionCtx, max_terms: u64) -> Result<T> {
    check_sector(a)?;
    let tol = ctx.tolerance::<T>() / T::from_int_ctx(1000, ctx);
    let opts = OracleOptions {
        max_terms,
        alternating: false,
    };
    let two = BigRational::from_integer(2.into());
    let zero_w = BigRational::zero();
    let lhs = direct_sum_with(&two, &zero_w, a, ctx, &tol, opts)?;
    let pi = T::pi_ctx(ctx);
    let dual = Complex::from_real(pi.square()) / a.clone();
    let rhs_sum = direct_sum_with(&two, &zero_w, &dual, ctx, &tol, opts)?;
    let root = (Complex::from_real(pi) / a.clone()).powr(&T::from_f64_ctx(0.5, ctx));
    let half = T::from_f64_ctx(0.5, ctx);
    let rhs = root.clone() * half.clone() - Complex::from_real(half) + root * rhs_sum.value;
    Ok(ComplexExt::abs(&(lhs.value - rhs)))
}

/// `|sum (-1)^n e^{-a n^p}/n^w - [2^{1-w} S_p(2^p a; w) - S_p(a; w)]|`.
pub fn alternating_residual<T: Real>(
    p: &BigRational,
    w: &BigRational,
    a: &Complex<T>,
    ctx: &PrecisionCtx,
    max_terms: u64,
) -> Result<T> {
    check_sector(a)?;
    let tol = ctx.tolerance::<T>() / T::from_int_ctx(1000, ctx);
    let plain = OracleOptions {
        max_terms,
        alternating: false,
    };
    let alt = OracleOptions {
        alternating: true,
        ..plain
    };
    let lhs = direct_sum_with(p, w, a, ctx, &tol, alt)?;
    let two = T::from_int_ctx(2, ctx);
    let pr = T::from_rational_ctx(p, ctx);
    let wr = T::from_rational_ctx(w, ctx);
    let scaled = a.clone() * two.powf(&pr);
    let s_scaled = direct_sum_with(p, w, &scaled, ctx, &tol, plain)?;
    let s = direct_sum_with(p, w, a, ctx, &tol, plain)?;
    let factor = two.powf(&(pr.integer(1) - wr));
    let rhs = s_scaled.value * factor - s.value;
    Ok(ComplexExt::abs(&(lhs.value - rhs)))
}
