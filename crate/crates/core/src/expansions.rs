//! Algebraic and exponentially small expansions of `S_p(a; w)`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeffgen::expansion_coefficients;
use crate::error::{Error, Result};
use crate::oracle::tail_bound;
use crate::params::{check_sector, classify, Classification, DerivedParams, Params, Regime};
use crate::scalar::{as_integer, rat, rat_int, ComplexExt, PrecisionCtx, Real};
use crate::special::{digamma, euler_const, gamma, zeta_is_trivial_zero, zeta_rational};

/// One term of an expansion.
#[derive(Clone, Debug)]
pub struct ExpTerm<T> {
    pub index: usize,
    pub value: Complex<T>,
    pub magnitude: T,
}

impl<T: Real> ExpTerm<T> {
    pub fn new(index: usize, value: Complex<T>) -> Self {
        let magnitude = ComplexExt::abs(&value);
        ExpTerm {
            index,
            value,
            magnitude,
        }
    }
}

fn czero<T: Real>(ctx: &PrecisionCtx) -> Complex<T> {
    Complex::new(T::from_int_ctx(0, ctx), T::from_int_ctx(0, ctx))
}

fn real_of<T: Real>(r: &BigRational, ctx: &PrecisionCtx) -> T {
    T::from_rational_ctx(r, ctx)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// The pole contribution `J`:
/// `(1/p) Gamma((1-w)/p) a^{(w-1)/p}`, or at the double pole `w = pM + 1`
/// `((-a)^M / M!) {gamma - (1/p) log a + (1/p) psi(M+1)}`.
pub fn j_term<T: Real>(
    p: &BigRational,
    w: &BigRational,
    a: &Complex<T>,
    ctx: &PrecisionCtx,
) -> Result<Complex<T>> {
    check_sector(a)?;
    let class = classify(p, w)?;
    let inv_p = real_of::<T>(&(BigRational::one() / p), ctx);
    if let Some(m) = class.double_pole {
        let mi = i32::try_from(m).map_err(|_| Error::InvalidInput(format!("M = {m} too large")))?;
        let neg_a = -a.clone();
        let pow = if mi == 0 {
            Complex::from_real(T::from_int_ctx(1, ctx))
        } else {
            neg_a.powi(mi)
        };
        let fact = T::from_rational_ctx(&BigRational::from_integer(factorial(m)), ctx);
        let euler: T = euler_const(ctx);
        let psi = digamma(&T::from_int_ctx(m as i64 + 1, ctx), ctx)?;
        let log_a = a.cln();
        let bracket = Complex::from_real(euler + psi * inv_p.clone()) - log_a * inv_p;
        return Ok(pow * bracket / fact);
    }
    let g = gamma(&real_of::<T>(&((BigRational::one() - w) / p), ctx), ctx)?;
    let e = real_of::<T>(&((w - BigRational::one()) / p), ctx);
    Ok(a.powr(&e) * (g * inv_p))
}

/// Finite (or convergent) algebraic part of the expansion.
#[derive(Clone, Debug)]
pub struct AlgebraicPart<T> {
    pub j_term: Complex<T>,
    /// Terms `(-1)^k zeta(w - kp) a^k / k!`, indexed by `k`.
    pub terms: Vec<ExpTerm<T>>,
    /// `k` runs over `0 .. cutoff` when the sum is finite.
    pub cutoff: Option<u64>,
    pub sum: Complex<T>,
    /// Magnitude of the first omitted nonzero term (or the last added one
    /// for convergent sums).
    pub remainder_estimate: T,
}

fn zeta_term<T: Real>(
    p: &BigRational,
    w: &BigRational,
    a_pow: &Complex<T>,
    k: u64,
    fact: &BigInt,
    ctx: &PrecisionCtx,
) -> Result<Complex<T>> {
    let s = w - p * rat_int(k as i64);
    if zeta_is_trivial_zero(&s) {
        return Ok(czero(ctx));
    }
    let z: T = zeta_rational(&s, ctx)?;
    let f = T::from_rational_ctx(&BigRational::from_integer(fact.clone()), ctx);
    let v = a_pow.clone() * (z / f);
    Ok(if k % 2 == 1 { -v } else { v })
}

/// Default number of `k` terms for `p > 1`: the smallest `N > s0 + 3/2`.
pub fn default_cutoff(p: &BigRational, w: &BigRational) -> u64 {
    let s0 = (w - BigRational::one()) / p;
    let n = (s0 + rat(3, 2)).floor().to_integer() + BigInt::one();
    n.to_u64().unwrap_or(1).max(1)
}

/// Upper bound on terms for the convergent sums.
pub const MAX_CONVERGENT_TERMS: u64 = 100_000;

/// `J + sum' (-1)^k zeta(w - kp) a^k / k!`.
///
/// The sum runs to convergence for `p <= 1`, over `k <= floor(w/p)` in the
/// even/even regime and over `k < N + offset` otherwise.
pub fn algebraic_part<T: Real>(params: &Params<T>, offset: u32) -> Result<AlgebraicPart<T>> {
    let class = params.classification()?;
    let cutoff = match class.regime {
        Regime::Convergent | Regime::BoundaryP1 => None,
        Regime::EvenEven => Some(
            (&params.w / &params.p)
                .floor()
                .to_integer()
                .to_u64()
                .unwrap_or(0)
                + 1,
        ),
        Regime::AlgebraicOnly => Some(default_cutoff(&params.p, &params.w) + offset as u64),
    };
    algebraic_sum(&params.p, &params.w, &params.a, &params.ctx, class, cutoff)
}

fn algebraic_sum<T: Real>(
    p: &BigRational,
    w: &BigRational,
    a: &Complex<T>,
    ctx: &PrecisionCtx,
    class: Classification,
    cutoff: Option<u64>,
) -> Result<AlgebraicPart<T>> {
    check_sector(a)?;
    if class.regime == Regime::BoundaryP1 {
        let two_pi = T::pi_ctx(ctx) * T::from_int_ctx(2, ctx);
        if !(ComplexExt::abs(a) < two_pi) {
            return Err(Error::Convergence(
                "the k-sum for p = 1 needs |a| < 2 pi".into(),
            ));
        }
    }
    let jt = j_term(p, w, a, ctx)?;
    let mut sum = jt.clone();
    let mut terms = Vec::new();
    let mut a_pow = Complex::from_real(T::from_int_ctx(1, ctx));
    let mut fact = BigInt::one();
    let tol = ctx.tolerance::<T>() / T::from_int_ctx(100, ctx);
    let zero = T::from_int_ctx(0, ctx);
    let mut remainder = zero.clone();
    let mut small_run = 0;
    let limit = cutoff.unwrap_or(MAX_CONVERGENT_TERMS);
    let mut k = 0u64;
    while k < limit {
        if k > 0 {
            a_pow = a_pow * a.clone();
            fact *= BigInt::from(k);
        }
        if class.double_pole == Some(k) {
            k += 1;
            continue;
        }
        let t = zeta_term(p, w, &a_pow, k, &fact, ctx)?;
        let term = ExpTerm::new(k as usize, t);
        sum = sum + term.value.clone();
        let zero_term = term.magnitude.is_zero();
        if cutoff.is_none() && !zero_term {
            remainder = term.magnitude.clone();
            let scale = ComplexExt::abs(&sum).max_of(T::from_int_ctx(1, ctx).epsilon());
            if term.magnitude <= tol.clone() * scale {
                small_run += 1;
            } else {
                small_run = 0;
            }
        }
        terms.push(term);
        if cutoff.is_none() && small_run >= 2 {
            return Ok(AlgebraicPart {
                j_term: jt,
                terms,
                cutoff,
                sum,
                remainder_estimate: remainder,
            });
        }
        k += 1;
    }
    if cutoff.is_none() {
        return Err(Error::Convergence(format!(
            "algebraic series not converged after {MAX_CONVERGENT_TERMS} terms"
        )));
    }
    // first omitted nonzero term
    if class.regime != Regime::EvenEven {
        let mut k = limit;
        for _ in 0..64 {
            a_pow = a_pow * a.clone();
            fact *= BigInt::from(k);
            if class.double_pole != Some(k) {
                let t = zeta_term(p, w, &a_pow, k, &fact, ctx)?;
                let m = ComplexExt::abs(&t);
                if !m.is_zero() {
                    remainder = m;
                    break;
                }
            }
            k += 1;
        }
    }
    Ok(AlgebraicPart {
        j_term: jt,
        terms,
        cutoff,
        sum,
        remainder_estimate: remainder,
    })
}

/// `S_p(a; -w) ~ (1/p) Gamma((1+w)/p) a^{-(1+w)/p} + sum_{k<N} (-1)^k zeta(-w-kp) a^k / k!`.
pub fn negative_w_expansion<T: Real>(
    p: &BigRational,
    w_nonneg: &BigRational,
    a: &Complex<T>,
    n_terms: Option<u64>,
    ctx: &PrecisionCtx,
) -> Result<AlgebraicPart<T>> {
    if w_nonneg.is_negative() {
        return Err(Error::InvalidInput(format!("w = {w_nonneg} must be nonnegative")));
    }
    if *p <= BigRational::one() {
        return Err(Error::InvalidInput(format!("p = {p} must exceed 1")));
    }
    let w = -w_nonneg.clone();
    let class = classify(p, &w)?;
    let n = n_terms.unwrap_or_else(|| default_cutoff(p, &w));
    algebraic_sum(p, &w, a, ctx, class, Some(n))
}

/// `hat S_q(z; lambda) = sum_{n>=1} e^{-z(n^q - 1)} / n^lambda` for several
/// `lambda` at once, summed until the tail is below `tol`.
pub fn s_q_hat_many<T: Real>(
    q: &BigRational,
    z: &Complex<T>,
    lambdas: &[BigRational],
    ctx: &PrecisionCtx,
    tol: &T,
) -> Result<Vec<Complex<T>>> {
    check_sector(z)?;
    if *q <= BigRational::one() {
        return Err(Error::InvalidInput(format!("q = {q} must exceed 1")));
    }
    let one = T::from_int_ctx(1, ctx);
    let mut sums: Vec<Complex<T>> = vec![Complex::from_real(one.clone()); lambdas.len()];
    if lambdas.is_empty() {
        return Ok(sums);
    }
    let lam_min = lambdas.iter().min().cloned().unwrap_or_default();
    let qr = real_of::<T>(q, ctx);
    let lam: Vec<T> = lambdas.iter().map(|l| real_of(l, ctx)).collect();
    let lam_min_r = real_of::<T>(&lam_min, ctx);
    let c = z.re.clone();
    let shift = c.exp();
    let mut n: u64 = 1;
    loop {
        if let Some(b) = tail_bound(&qr, &lam_min_r, &c, n) {
            if b * shift.clone() <= *tol {
                return Ok(sums);
            }
        }
        if n > 10_000_000 {
            return Err(Error::Convergence("hat S_q did not converge".into()));
        }
        n += 1;
        let ln_n = one.integer(n as i64).ln();
        let nq = (qr.clone() * ln_n.clone()).exp();
        let base = (-(z.clone() * (nq - one.clone()))).cexp();
        for (s, l) in sums.iter_mut().zip(&lam) {
            let f = (-(l.clone() * ln_n.clone())).exp();
            *s = s.clone() + base.clone() * f;
        }
    }
}

pub fn s_q_hat<T: Real>(
    q: &BigRational,
    z: &Complex<T>,
    lam: &BigRational,
    ctx: &PrecisionCtx,
    tol: &T,
) -> Result<Complex<T>> {
    Ok(s_q_hat_many(q, z, std::slice::from_ref(lam), ctx, tol)?.remove(0))
}

/// One exponentially small expansion, `E_r` (a conjugate pair of branches)
/// or `hat E_N` (a single branch).
#[derive(Clone, Debug)]
pub struct Expansion<T> {
    pub r: u32,
    pub hat: bool,
    pub psi: BigRational,
    /// Terms `j = 0, 1, ...`, including the factor `(-1)^m (2 pi)^w`.
    pub terms: Vec<ExpTerm<T>>,
    /// Magnitude of the `X e^{-pi i psi}` branch of each term.
    pub branch_magnitudes: Vec<T>,
    /// Number of leading terms summed.
    pub retained: usize,
    /// First local minimum of `|c_j X^{-j}|` when it was searched for.
    pub least_index: Option<usize>,
    pub sum: Complex<T>,
    pub remainder_estimate: T,
    /// False when the expansion was dropped from the total.
    pub included: bool,
}

impl<T: Real> Expansion<T> {
    pub fn partial_sum(&self, count: usize) -> Complex<T> {
        let mut s = Complex::new(self.sum.re.integer(0), self.sum.re.integer(0));
        for t in self.terms.iter().take(count) {
            s = s + t.value.clone();
        }
        s
    }

    /// Index of the last retained term.
    pub fn j0(&self) -> Option<usize> {
        self.retained.checked_sub(1)
    }

    /// Single-branch magnitude of the least term.
    pub fn least_term(&self) -> Option<T> {
        self.least_index.and_then(|j| self.branch_magnitudes.get(j).cloned())
    }

    pub fn leading_magnitude(&self) -> Option<T> {
        self.terms.first().map(|t| t.magnitude.clone())
    }

    fn truncate_at(&mut self, retained: usize) {
        self.retained = retained.min(self.terms.len());
        self.sum = self.partial_sum(self.retained);
        let zero = self.sum.re.integer(0);
        self.remainder_estimate = match self.terms.get(self.retained) {
            Some(t) if self.hat => t.magnitude.clone(),
            Some(_) => self.branch_magnitudes[self.retained].clone() * zero.integer(2),
            None => zero,
        };
    }
}

fn check_even_even<T: Real>(params: &Params<T>) -> Result<(Classification, BigInt)> {
    let class = params.classification()?;
    if class.regime != Regime::EvenEven {
        return Err(Error::Regime(format!(
            "the exponentially small expansions need p and w even (got p = {}, w = {})",
            params.p, params.w
        )));
    }
    let m = as_integer(&(&params.w / rat_int(2))).expect("w is even");
    Ok((class, m))
}

/// `(-1)^m (2 pi)^w A / (2 pi kappa)`.
fn exp_prefactor<T: Real>(d: &DerivedParams<T>, m: &BigInt, ctx: &PrecisionCtx) -> T {
    let two_pi = T::pi_ctx(ctx) * T::from_int_ctx(2, ctx);
    let kr = real_of::<T>(&d.kappa, ctx);
    let wr = real_of::<T>(&d.w, ctx);
    let v = two_pi.powf(&wr) * d.big_a.clone() / (two_pi * kr);
    if (m % 2u32).is_zero() {
        v
    } else {
        -v
    }
}

fn lambdas<T: Real>(d: &DerivedParams<T>, count: usize) -> Vec<BigRational> {
    (0..count).map(|j| d.lambda(j)).collect()
}

fn sq_tolerance<T: Real>(ctx: &PrecisionCtx) -> T {
    ctx.tolerance::<T>() / T::from_int_ctx(1000, ctx)
}

/// All terms `j < coeffs.len()` of every expansion, with nothing summed yet.
fn theorem1_raw<T: Real>(
    params: &Params<T>,
    d: &DerivedParams<T>,
    m: &BigInt,
    coeffs: &[T],
) -> Result<Vec<Expansion<T>>> {
    let ctx = &params.ctx;
    let pref = exp_prefactor(d, m, ctx);
    let pi = T::pi_ctx(ctx);
    let theta = real_of::<T>(&d.vartheta, ctx);
    let lams = lambdas(d, coeffs.len());
    let tol = sq_tolerance::<T>(ctx);
    let count = d.expansion_count();
    let mut out = Vec::with_capacity(count as usize);
    for r in 0..count {
        let hat = r == d.big_n;
        let psi = d.psi(r);
        let angle = pi.clone() * real_of::<T>(&psi, ctx);
        let branches: Vec<Complex<T>> = if hat {
            vec![d.x.clone()]
        } else {
            let rot = Complex::<T>::cis(&-angle.clone());
            vec![d.x.clone() * rot.clone(), d.x.clone() * rot.conj()]
        };
        // per branch: Z^{theta - j} e^{-Z} hat S_q(Z; lambda_j)
        let mut per_branch: Vec<Vec<Complex<T>>> = Vec::with_capacity(branches.len());
        for z in &branches {
            let shat = s_q_hat_many(&d.q, z, &lams, ctx, &tol)?;
            let zinv = Complex::from_real(T::from_int_ctx(1, ctx)) / z.clone();
            let mut zp = z.powr(&theta) * (-z.clone()).cexp();
            let mut vals = Vec::with_capacity(coeffs.len());
            for (j, s) in shat.into_iter().enumerate() {
                let v = zp.clone() * s * (coeffs[j].clone() * pref.clone());
                vals.push(if j % 2 == 1 { -v } else { v });
                zp = zp * zinv.clone();
            }
            per_branch.push(vals);
        }
        let mut terms = Vec::with_capacity(coeffs.len());
        let mut branch_magnitudes = Vec::with_capacity(coeffs.len());
        for j in 0..coeffs.len() {
            let mut v = per_branch[0][j].clone();
            branch_magnitudes.push(ComplexExt::abs(&v));
            for b in per_branch.iter().skip(1) {
                v = v + b[j].clone();
            }
            terms.push(ExpTerm::new(j, v));
        }
        let zero = czero::<T>(ctx);
        out.push(Expansion {
            r,
            hat,
            psi,
            terms,
            branch_magnitudes,
            retained: 0,
            least_index: None,
            sum: zero,
            remainder_estimate: T::from_int_ctx(0, ctx),
            included: true,
        });
    }
    Ok(out)
}

fn coefficients_real<T: Real>(params: &Params<T>, count: usize) -> Result<Vec<T>> {
    let table = expansion_coefficients(&params.p, &params.w, count)?;
    let like = T::from_int_ctx(0, &params.ctx);
    Ok(table.to_real(&like))
}

/// Exponentially small part in complex form, each expansion truncated after
/// `m_terms` terms (`j < m_terms`).
pub fn theorem1_exponential<T: Real>(params: &Params<T>, m_terms: usize) -> Result<Vec<Expansion<T>>> {
    let (_, m) = check_even_even(params)?;
    if m_terms == 0 {
        return Err(Error::InvalidInput("need at least one term".into()));
    }
    let d = params.derive()?;
    let coeffs = coefficients_real(params, m_terms + 1)?;
    let mut out = theorem1_raw(params, &d, &m, &coeffs)?;
    for e in &mut out {
        e.truncate_at(m_terms);
    }
    Ok(out)
}

/// Exponentially small part in real form (real positive `a`), each
/// expansion truncated after `m_terms` terms. The `n`-sums stop at `n_max`
/// when given, otherwise where the tail falls below the working tolerance.
pub fn theorem2_exponential<T: Real>(
    params: &Params<T>,
    m_terms: usize,
    n_max: Option<u64>,
) -> Result<Vec<Expansion<T>>> {
    let (_, m) = check_even_even(params)?;
    if !params.a_is_real() {
        return Err(Error::InvalidInput("the real form needs real positive a".into()));
    }
    if m_terms == 0 {
        return Err(Error::InvalidInput("need at least one term".into()));
    }
    let ctx = &params.ctx;
    let d = params.derive()?;
    let coeffs = coefficients_real(params, m_terms + 1)?;
    let count = coeffs.len();
    let pref = exp_prefactor(&d, &m, ctx);
    let pi = T::pi_ctx(ctx);
    let one = T::from_int_ctx(1, ctx);
    let x = d.x.re.clone();
    let theta = real_of::<T>(&d.vartheta, ctx);
    let qr = real_of::<T>(&d.q, ctx);
    let wr = real_of::<T>(&d.w, ctx);
    let tol = sq_tolerance::<T>(ctx);
    let lam_min = real_of::<T>(&d.lambda(0).min(d.lambda(count - 1)), ctx);
    let mut out = Vec::new();
    for r in 0..d.expansion_count() {
        let hat = r == d.big_n;
        let psi = d.psi(r);
        let angle = pi.clone() * real_of::<T>(&psi, ctx);
        let (cos_a, sin_a) = (angle.cos(), angle.sin());
        let factor = if hat { pref.clone() } else { pref.clone() * one.integer(2) };
        let c = x.clone() * cos_a.clone();
        let mut vals = vec![one.integer(0); count];
        let mut n: u64 = 0;
        loop {
            if let Some(limit) = n_max {
                if n >= limit {
                    break;
                }
            } else if n >= 1 {
                if let Some(b) = tail_bound(&qr, &lam_min, &c, n) {
                    if b * c.exp() <= tol {
                        break;
                    }
                }
            }
            n += 1;
            let ln_n = one.integer(n as i64).ln();
            let xn = x.clone() * (qr.clone() * ln_n.clone()).exp();
            let head = ((wr.clone() - one.clone()) * ln_n + theta.clone() * xn.ln() - xn.clone() * cos_a.clone()).exp();
            let phase0 = xn.clone() * sin_a.clone();
            let xinv = xn.recip();
            let mut xp = one.clone();
            for j in 0..count {
                let jr = one.integer(j as i64);
                let cosv = (phase0.clone() + angle.clone() * (jr - theta.clone())).cos();
                let v = head.clone() * xp.clone() * coeffs[j].clone() * cosv;
                vals[j] = if j % 2 == 1 {
                    vals[j].clone() - v
                } else {
                    vals[j].clone() + v
                };
                xp = xp * xinv.clone();
            }
        }
        let terms: Vec<ExpTerm<T>> = vals
            .into_iter()
            .enumerate()
            .map(|(j, v)| ExpTerm::new(j, Complex::from_real(v * factor.clone())))
            .collect();
        let branch_magnitudes = terms
            .iter()
            .map(|t| if hat { t.magnitude.clone() } else { t.magnitude.clone() / one.integer(2) })
            .collect();
        let mut e = Expansion {
            r,
            hat,
            psi,
            terms,
            branch_magnitudes,
            retained: 0,
            least_index: None,
            sum: czero(ctx),
            remainder_estimate: one.integer(0),
            included: true,
        };
        e.truncate_at(m_terms);
        out.push(e);
    }
    Ok(out)
}

/// Location of the least term of `|c_j X^{-j}|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OptimalIndex {
    /// First local minimum: the first `j` with `m_{j+1} >= m_j`.
    pub least: usize,
    /// Last retained index, `max(least, 1) - 1`.
    pub j0: usize,
}

/// First local minimum of `|c_j| |X|^{-j}` over `j < coeffs.len()`.
pub fn least_term_index<T: Real>(coeffs: &[T], x_abs: &T) -> Result<OptimalIndex> {
    let xinv = x_abs.recip();
    let mut pow = x_abs.integer(1);
    let mut mags = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        mags.push(c.abs() * pow.clone());
        pow = pow * xinv.clone();
    }
    for j in 0..mags.len().saturating_sub(1) {
        if mags[j + 1] >= mags[j] {
            return Ok(OptimalIndex {
                least: j,
                j0: j.max(1) - 1,
            });
        }
    }
    Err(Error::NoMinimum { m_max: coeffs.len() })
}

/// Smallest cap on the coefficient count when searching for the least term.
pub const DEFAULT_MAX_COEFFICIENTS: usize = 512;

/// Automatic cap: the least term sits near `j = |X|`.
pub fn coefficient_cap<T: Real>(params: &Params<T>) -> Result<usize> {
    let x = ComplexExt::abs(&params.derive()?.x).to_f64();
    if !x.is_finite() || x > 1e7 {
        return Err(Error::InvalidInput(format!("|X| = {x:e} is too large for optimal truncation")));
    }
    Ok(DEFAULT_MAX_COEFFICIENTS.max(2 * x.ceil() as usize + 32))
}

/// Optimal truncation of the expansions of the even/even regime.
pub fn optimal_truncation<T: Real>(params: &Params<T>, m_max: usize) -> Result<OptimalIndex> {
    check_even_even(params)?;
    let d = params.derive()?;
    let xa = ComplexExt::abs(&d.x);
    let mut count = 16usize.min(m_max.max(2));
    loop {
        let coeffs = coefficients_real(params, count)?;
        match least_term_index(&coeffs, &xa) {
            Ok(ix) if ix.least + 3 <= count || count >= m_max => return Ok(ix),
            Ok(_) | Err(Error::NoMinimum { .. }) if count < m_max => {
                count = (count * 2).min(m_max);
            }
            Err(e) => return Err(e),
            Ok(ix) => return Ok(ix),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// `j < M` in every expansion.
    Fixed(usize),
    /// Each expansion stops just before its least term.
    Optimal,
}

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub truncation: Truncation,
    pub include_exponentials: bool,
    /// Extra `k` terms beyond the default cutoff for `p > 1`.
    pub algebraic_offset: u32,
    /// Cap on the coefficients tried in optimal mode; `None` picks one from `|X|`.
    pub max_coefficients: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            truncation: Truncation::Optimal,
            include_exponentials: true,
            algebraic_offset: 0,
            max_coefficients: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvalResult<T> {
    pub regime: Regime,
    pub double_pole: Option<u64>,
    pub algebraic: AlgebraicPart<T>,
    pub exponential: Vec<Expansion<T>>,
    /// Sum of the included exponentially small expansions.
    pub exponential_total: Complex<T>,
    pub total: Complex<T>,
    pub remainder_estimate: T,
}

impl<T: Real> EvalResult<T> {
    /// Last retained index of each exponential expansion.
    pub fn j0(&self) -> Vec<Option<usize>> {
        self.exponential.iter().map(|e| e.j0()).collect()
    }
}

/// Full evaluation of the small-`a` expansion.
pub fn evaluate<T: Real>(params: &Params<T>, opts: &EvalOptions) -> Result<EvalResult<T>> {
    let class = params.classification()?;
    let algebraic = algebraic_part(params, opts.algebraic_offset)?;
    let ctx = &params.ctx;
    let mut exponential = Vec::new();
    let mut remainder = algebraic.remainder_estimate.clone();
    if class.regime == Regime::EvenEven {
        let (_, m) = check_even_even(params)?;
        let d = params.derive()?;
        let (coeffs, retained, least) = match opts.truncation {
            Truncation::Fixed(n) => {
                if n == 0 {
                    return Err(Error::InvalidInput("need at least one term".into()));
                }
                (coefficients_real(params, n + 1)?, n, None)
            }
            Truncation::Optimal => {
                let cap = match opts.max_coefficients {
                    Some(m) => m,
                    None => coefficient_cap(params)?,
                };
                let ix = optimal_truncation(params, cap)?;
                let count = (ix.least + 3).max(ix.j0 + 2);
                (coefficients_real(params, count)?, ix.j0 + 1, Some(ix.least))
            }
        };
        exponential = theorem1_raw(params, &d, &m, &coeffs)?;
        for e in &mut exponential {
            e.least_index = least;
            e.truncate_at(retained);
        }
        if least.is_some() && exponential.len() > 1 {
            // an expansion whose leading term is below the least term of
            // the first cannot improve the result
            let floor = exponential[0].least_term();
            for e in exponential.iter_mut().skip(1) {
                if let (Some(f), Some(lead)) = (floor.clone(), e.leading_magnitude()) {
                    if lead < f {
                        e.included = false;
                    }
                }
            }
        }
        if !opts.include_exponentials {
            for e in &mut exponential {
                e.included = false;
            }
        }
        let zero = T::from_int_ctx(0, ctx);
        remainder = exponential
            .iter()
            .filter(|e| e.included)
            .map(|e| e.remainder_estimate.clone())
            .fold(zero, |a, b| a.max_of(b));
        if !opts.include_exponentials {
            if let Some(lead) = exponential.first().and_then(|e| e.leading_magnitude()) {
                remainder = lead;
            }
        }
    }
    let mut exponential_total = czero::<T>(ctx);
    for e in exponential.iter().filter(|e| e.included) {
        exponential_total = exponential_total + e.sum.clone();
    }
    let total = algebraic.sum.clone() + exponential_total.clone();
    Ok(EvalResult {
        regime: class.regime,
        double_pole: class.double_pole,
        algebraic,
        exponential,
        exponential_total,
        total,
        remainder_estimate: remainder,
    })
}
