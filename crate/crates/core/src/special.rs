//! Bernoulli numbers, Stirling coefficients, gamma, digamma and zeta.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{as_integer, rat_int, PrecisionCtx, Real};
use crate::series::FormalSeries;

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());
static STIRLING: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> BigRational {
    if n == 1 {
        return BigRational::new((-1).into(), 2.into());
    }
    if n > 1 && n % 2 == 1 {
        return BigRational::zero();
    }
    if let Some(b) = BERNOULLI.read().unwrap().get(n) {
        return b.clone();
    }
    let mut table = BERNOULLI.write().unwrap();
    if table.is_empty() {
        table.push(BigRational::one());
    }
    while table.len() <= n {
        let m = table.len();
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += BigRational::from_integer(binom.clone()) * b;
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        let b = -acc / BigRational::from_integer(BigInt::from(m + 1));
        table.push(b);
    }
    table[n].clone()
}

/// Stirling coefficients `gamma_0 .. gamma_{count-1}`, with
/// `Gamma*(z) ~ sum (-1)^k gamma_k z^-k`, so `gamma_1 = -1/12`.
pub fn stirling_coefficients(count: usize) -> Vec<BigRational> {
    let count = count.max(1);
    {
        let cache = STIRLING.read().unwrap();
        if cache.len() >= count {
            return cache[..count].to_vec();
        }
    }
    let order = count.max(16).next_power_of_two();
    let log_series = FormalSeries::from_fn(order, |k| {
        if k % 2 == 1 {
            let j = (k + 1) / 2;
            bernoulli(2 * j) / rat_int((2 * j * (2 * j - 1)) as i64)
        } else {
            BigRational::zero()
        }
    });
    let g = log_series.exp().expect("constant term is zero");
    let signed: Vec<BigRational> = g
        .into_coeffs()
        .into_iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c } else { c })
        .collect();
    let mut cache = STIRLING.write().unwrap();
    if cache.len() < signed.len() {
        *cache = signed;
    }
    cache[..count].to_vec()
}

/// Exact `zeta(-n)` for `n >= 0`.
pub fn zeta_nonpositive_int(n: u64) -> BigRational {
    if n == 0 {
        return BigRational::new((-1).into(), 2.into());
    }
    -bernoulli(n as usize + 1) / rat_int(n as i64 + 1)
}

fn working_like<T: Real>(ctx: &PrecisionCtx) -> T {
    T::from_int_ctx(0, ctx)
}

fn decimal_digits<T: Real>(x: &T) -> f64 {
    x.bits() as f64 * std::f64::consts::LOG10_2
}

fn nonpositive_integer<T: Real>(x: &T) -> bool {
    x.is_integer() && !(*x > x.integer(0))
}

fn pole<T: Real>(function: &'static str, x: &T) -> Error {
    Error::Pole {
        function,
        at: format!("{}", x.to_f64()),
    }
}

/// `ln Gamma(z)` for `z` at least `z_min` via the Stirling series.
fn ln_gamma_stirling<T: Real>(z: &T, eps: &T) -> T {
    let half = z.ratio(1, 2);
    let two_pi = z.pi() * z.integer(2);
    let mut s = (z.clone() - half.clone()) * z.ln() - z.clone() + half * two_pi.ln();
    let zinv = z.recip();
    let zinv2 = zinv.square();
    let mut zp = zinv;
    for k in 1..2000usize {
        let b = bernoulli(2 * k);
        let c = z.rational(&(b / rat_int((2 * k * (2 * k - 1)) as i64)));
        let t = c * zp.clone();
        s = s + t.clone();
        if t.abs() < *eps {
            break;
        }
        zp = zp * zinv2.clone();
    }
    s
}

/// Shift threshold above which the Stirling series reaches full accuracy.
fn stirling_threshold<T: Real>(like: &T) -> f64 {
    (0.5 * decimal_digits(like)).ceil() + 5.0
}

/// `Gamma(x)` for real `x`.
pub fn gamma<T: Real>(x: &T, ctx: &PrecisionCtx) -> Result<T> {
    let x = x.clone() + working_like::<T>(ctx);
    if !x.is_finite() {
        return Err(Error::InvalidInput("gamma of a non-finite value".into()));
    }
    if nonpositive_integer(&x) {
        return Err(pole("gamma", &x));
    }
    if x < x.ratio(1, 2) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let pi = x.pi();
        let g = gamma(&(x.integer(1) - x.clone()), ctx)?;
        return Ok(pi.clone() / ((pi * x.clone()).sin() * g));
    }
    if x.is_integer() && x < x.integer(200) {
        let n = x.to_f64() as i64;
        let mut acc = x.integer(1);
        for k in 2..n {
            acc = acc * x.integer(k);
        }
        return Ok(acc);
    }
    let eps = x.epsilon();
    let threshold = stirling_threshold(&x);
    let mut z = x.clone();
    let mut prod = x.integer(1);
    while z.to_f64() < threshold {
        prod = prod * z.clone();
        z = z + x.integer(1);
    }
    Ok(ln_gamma_stirling(&z, &eps).exp() / prod)
}

/// `psi(x) = Gamma'(x) / Gamma(x)`.
pub fn digamma<T: Real>(x: &T, ctx: &PrecisionCtx) -> Result<T> {
    let x = x.clone() + working_like::<T>(ctx);
    if !x.is_finite() {
        return Err(Error::InvalidInput("digamma of a non-finite value".into()));
    }
    if nonpositive_integer(&x) {
        return Err(pole("digamma", &x));
    }
    if x < x.ratio(1, 2) {
        // psi(1-x) - psi(x) = pi cot(pi x)
        let pi = x.pi();
        let d = digamma(&(x.integer(1) - x.clone()), ctx)?;
        return Ok(d - pi.clone() / (pi * x.clone()).tan());
    }
    let eps = x.epsilon();
    let threshold = stirling_threshold(&x);
    let mut z = x.clone();
    let mut shift = x.integer(0);
    while z.to_f64() < threshold {
        shift = shift + z.recip();
        z = z + x.integer(1);
    }
    let zinv2 = z.recip().square();
    let mut s = z.ln() - (z.clone() * z.integer(2)).recip();
    let mut zp = zinv2.clone();
    for k in 1..2000usize {
        let c = z.rational(&(bernoulli(2 * k) / rat_int(2 * k as i64)));
        let t = c * zp.clone();
        s = s - t.clone();
        if t.abs() < eps {
            break;
        }
        zp = zp * zinv2.clone();
    }
    Ok(s - shift)
}

/// Euler's constant.
pub fn euler_const<T: Real>(ctx: &PrecisionCtx) -> T {
    -digamma(&T::from_int_ctx(1, ctx), ctx).expect("psi(1) is regular")
}

/// Riemann zeta at a real argument.
pub fn riemann_zeta<T: Real>(s: &T, ctx: &PrecisionCtx) -> Result<T> {
    let s = s.clone() + working_like::<T>(ctx);
    if !s.is_finite() {
        return Err(Error::InvalidInput("zeta of a non-finite value".into()));
    }
    let one = s.integer(1);
    if s == one {
        return Err(pole("zeta", &s));
    }
    if nonpositive_integer(&s) {
        let n = (-s.clone()).round_to_bigint().and_then(|n| n.to_u64());
        if let Some(n) = n {
            return Ok(s.rational(&zeta_nonpositive_int(n)));
        }
    }
    if s < s.ratio(1, 2) {
        return zeta_reflected(&s, ctx);
    }
    Ok(zeta_euler_maclaurin(&s))
}

/// Zeta at an exact rational argument: exact for nonpositive integers.
pub fn zeta_rational<T: Real>(s: &BigRational, ctx: &PrecisionCtx) -> Result<T> {
    if s.is_one() {
        return Err(Error::Pole {
            function: "zeta",
            at: "1".into(),
        });
    }
    if let Some(n) = as_integer(s) {
        if !n.is_positive() {
            let n = (-n).to_u64().ok_or_else(|| {
                Error::InvalidInput(format!("zeta argument {s} is out of range"))
            })?;
            return Ok(T::from_rational_ctx(&zeta_nonpositive_int(n), ctx));
        }
    }
    riemann_zeta(&T::from_rational_ctx(s, ctx), ctx)
}

/// True when `zeta(s)` vanishes exactly (a trivial zero).
pub fn zeta_is_trivial_zero(s: &BigRational) -> bool {
    match as_integer(s) {
        Some(n) => n.is_negative() && (n % 2u32).is_zero(),
        None => false,
    }
}

/// `zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)`.
pub fn zeta_reflected<T: Real>(s: &T, ctx: &PrecisionCtx) -> Result<T> {
    let one = s.integer(1);
    let pi = s.pi();
    let t = one.clone() - s.clone();
    let two = s.integer(2);
    let f = two.powf(s) * pi.powf(&(s.clone() - one)) * (pi * s.clone() / two).sin();
    Ok(f * gamma(&t, ctx)? * zeta_euler_maclaurin(&t))
}

/// Euler-Maclaurin summation, for `s >= 1/2`, `s != 1`.
pub fn zeta_euler_maclaurin<T: Real>(s: &T) -> T {
    let one = s.integer(1);
    let digits = decimal_digits(s);
    let n = (digits + s.abs().to_f64().min(1e6)).ceil().max(10.0) as i64;
    let eps = s.epsilon();
    let neg_s = -s.clone();
    let mut head = s.integer(0);
    for k in 1..n {
        head = head + (neg_s.clone() * s.integer(k).ln()).exp();
    }
    let big_n = s.integer(n);
    let ln_n = big_n.ln();
    let n_pow = (neg_s * ln_n).exp();
    let mut total = head + n_pow.clone() * big_n.clone() / (s.clone() - one.clone())
        + n_pow.clone() / s.integer(2);
    // B_2k / (2k)! * s (s+1) ... (s+2k-2) * N^(-s-2k+1)
    let n_inv2 = big_n.recip().square();
    let mut rising = s.clone();
    let mut npow = n_pow / big_n.clone();
    let mut fact = BigInt::from(2);
    let scale = total.abs();
    for k in 1..1000usize {
        let c = s.rational(&(bernoulli(2 * k) / BigRational::from_integer(fact.clone())));
        let t = c * rising.clone() * npow.clone();
        total = total + t.clone();
        if t.abs() < eps.clone() * scale.clone() {
            break;
        }
        let m = 2 * k as i64;
        rising = rising * (s.clone() + s.integer(m - 1)) * (s.clone() + s.integer(m));
        npow = npow * n_inv2.clone();
        fact = fact * BigInt::from(m + 1) * BigInt::from(m + 2);
    }
    total
}
