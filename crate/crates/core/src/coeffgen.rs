//! Inverse-factorial coefficients `c_j(w, p)`.
//!
//! The coefficients are defined by matching, in powers of `xi = 1/(kappa s)`,
//!
//! ```text
//! R(s) G(s) = sum_j c_j / (1 - kappa s - vartheta)_j
//! ```
//!
//! where `R` collects the elementary factors of the Stirling approximation
//! and `G` the scaled gamma functions `Gamma*`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::scalar::{rat, rat_int, Field, Real};
use crate::series::FormalSeries;
use crate::special::stirling_coefficients;

/// Scalars the coefficient recursion can run over.
pub trait Coefficient: Field + PartialOrd {
    fn embed(&self, r: &BigRational) -> Self;
}

impl Coefficient for BigRational {
    fn embed(&self, r: &BigRational) -> Self {
        r.clone()
    }
}

impl Coefficient for f64 {
    fn embed(&self, r: &BigRational) -> Self {
        self.rational(r)
    }
}

impl Coefficient for BigReal {
    fn embed(&self, r: &BigRational) -> Self {
        self.rational(r)
    }
}

fn check_p<F: Coefficient>(p: &F) -> Result<()> {
    if *p > p.integer(1) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("coefficients need p > 1, got p = {p:?}")))
    }
}

/// `log e(beta s; gamma)` in powers of `xi`:
/// `sum_k (-1)^k [gamma/(k+1) - (gamma - 1/2)/k] (gamma kappa / beta)^k xi^k`.
fn log_e<F: Coefficient>(beta: &F, gamma: &F, kappa: &F, order: usize) -> FormalSeries<F> {
    let half = gamma.ratio(1, 2);
    let u = gamma.clone() * kappa.clone() / beta.clone();
    let mut pow = gamma.integer(1);
    FormalSeries::from_fn(order, |k| {
        if k == 0 {
            return gamma.integer(0);
        }
        pow = pow.clone() * u.clone();
        let k_ = k as i64;
        let c = gamma.clone() / gamma.integer(k_ + 1) - (gamma.clone() - half.clone()) / gamma.integer(k_);
        let v = c * pow.clone();
        if k % 2 == 1 {
            -v
        } else {
            v
        }
    })
}

/// `Gamma*(beta s + gamma)` in powers of `xi`.
///
/// With `v = kappa xi / beta` we have `1/(beta s + gamma) = v / (1 + gamma v)`,
/// and `(v/(1+gamma v))^k = sum_m C(-k, m) gamma^m v^(k+m)`.
fn scaled_gamma<F: Coefficient>(beta: &F, gamma: &F, kappa: &F, order: usize) -> FormalSeries<F> {
    let stirling = stirling_coefficients(order);
    // Gamma*(z) ~ sum g_k z^-k with g_k = (-1)^k gamma_k
    let g: Vec<F> = stirling
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let v = gamma.embed(s);
            if k % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    let mut gpow = vec![gamma.integer(1)];
    for m in 1..order {
        gpow.push(gpow[m - 1].clone() * gamma.clone());
    }
    // binom[n-1][m] = C(n-1, m)
    let mut in_v = Vec::with_capacity(order);
    in_v.push(gamma.integer(1));
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..order {
        // coefficient of v^n: sum_{k=1}^n g_k (-1)^(n-k) C(n-1, n-k) gamma^(n-k)
        let mut acc = gamma.integer(0);
        for k in 1..=n {
            let m = n - k;
            if g[k].is_zero() {
                continue;
            }
            let b = gamma.embed(&BigRational::from_integer(row[m].clone()));
            let t = g[k].clone() * b * gpow[m].clone();
            acc = if m % 2 == 1 { acc - t } else { acc + t };
        }
        in_v.push(acc);
        let mut next = vec![BigInt::one(); n + 1];
        for i in 1..n {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    FormalSeries::new(in_v).dilate(&(kappa.clone() / beta.clone()))
}

/// Expansion of `R(s) = e(ps; alpha) / (e(s; 1) e(kappa s; vartheta))`.
pub fn series_r<F: Coefficient>(p: &F, w: &F, order: usize) -> Result<FormalSeries<F>> {
    check_p(p)?;
    let one = p.integer(1);
    let kappa = p.clone() - one.clone();
    let alpha = one.clone() - w.clone();
    let vartheta = p.ratio(1, 2) - w.clone();
    let log_r = &(&log_e(p, &alpha, &kappa, order) - &log_e(&one, &one, &kappa, order))
        - &log_e(&kappa, &vartheta, &kappa, order);
    log_r.exp()
}

/// Expansion of `G(s) = Gamma*(alpha + ps) / (Gamma*(1 + s) Gamma*(kappa s + vartheta))`.
pub fn series_g<F: Coefficient>(p: &F, w: &F, order: usize) -> Result<FormalSeries<F>> {
    check_p(p)?;
    let one = p.integer(1);
    let kappa = p.clone() - one.clone();
    let alpha = one.clone() - w.clone();
    let vartheta = p.ratio(1, 2) - w.clone();
    let num = scaled_gamma(p, &alpha, &kappa, order);
    let den = &scaled_gamma(&one, &one, &kappa, order) * &scaled_gamma(&kappa, &vartheta, &kappa, order);
    Ok(&num * &den.reciprocal()?)
}

/// Basis series of `1/(1 - kappa s - vartheta)_j` for `j < count`:
/// `(-xi)^j prod_{i<j} (1 + (vartheta - 1 - i) xi)^-1`.
pub fn basis_series<F: Coefficient>(vartheta: &F, count: usize, order: usize) -> Vec<FormalSeries<F>> {
    let mut bases = Vec::with_capacity(count);
    let mut basis = FormalSeries::one(order, vartheta);
    for j in 0..count {
        bases.push(basis.clone());
        // next = basis * (-xi) / (1 + d xi), via y_n = x_n - d y_{n-1}
        let d = vartheta.clone() - vartheta.integer(1 + j as i64);
        let x = (-&basis).shift(1);
        let mut y: Vec<F> = Vec::with_capacity(order);
        for n in 0..order {
            let v = if n == 0 {
                x.coeff(0).clone()
            } else {
                x.coeff(n).clone() - d.clone() * y[n - 1].clone()
            };
            y.push(v);
        }
        basis = FormalSeries::new(y);
    }
    bases
}

/// `c_0 .. c_{count-1}` over any coefficient field.
pub fn coefficients_in<F: Coefficient>(p: &F, w: &F, count: usize) -> Result<Vec<F>> {
    check_p(p)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let order = count;
    let vartheta = p.ratio(1, 2) - w.clone();
    let rg = &series_r(p, w, order)? * &series_g(p, w, order)?;
    let bases = basis_series(&vartheta, count, order);
    let mut c: Vec<F> = Vec::with_capacity(count);
    for n in 0..count {
        let mut s = rg.coeff(n).clone();
        for (j, cj) in c.iter().enumerate() {
            let b = bases[j].coeff(n);
            if !b.is_zero() {
                s = s - cj.clone() * b.clone();
            }
        }
        c.push(if n % 2 == 1 { -s } else { s });
    }
    Ok(c)
}

/// `c_0 .. c_{M-1}` for fixed `(p, w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    pub p: BigRational,
    pub w: BigRational,
    pub c: Vec<BigRational>,
}

impl CoefficientTable {
    pub fn alpha(&self) -> BigRational {
        BigRational::one() - &self.w
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// The coefficients rounded to the precision of `like`.
    pub fn to_real<T: Real>(&self, like: &T) -> Vec<T> {
        self.c.iter().map(|c| like.rational(c)).collect()
    }
}

type CacheKey = (BigRational, BigRational);

fn cache() -> &'static RwLock<HashMap<CacheKey, Vec<BigRational>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Vec<BigRational>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Exact `c_0 .. c_{count-1}`; results are cached per `(p, w)`.
pub fn expansion_coefficients(p: &BigRational, w: &BigRational, count: usize) -> Result<CoefficientTable> {
    if *p <= BigRational::one() {
        return Err(Error::InvalidInput(format!("coefficients need p > 1, got p = {p}")));
    }
    let key = (p.clone(), w.clone());
    if let Some(c) = cache().read().unwrap().get(&key) {
        if c.len() >= count {
            return Ok(CoefficientTable {
                p: p.clone(),
                w: w.clone(),
                c: c[..count].to_vec(),
            });
        }
    }
    let c = if *p == rat_int(2) {
        closed_form_p2(w, count).c
    } else {
        coefficients_in(p, w, count)?
    };
    let mut guard = cache().write().unwrap();
    let entry = guard.entry(key).or_default();
    if entry.len() < c.len() {
        *entry = c.clone();
    }
    Ok(CoefficientTable {
        p: p.clone(),
        w: w.clone(),
        c,
    })
}

/// `c_j = 2^{-2j} (w)_{2j} / j!` for `p = 2`.
pub fn closed_form_p2(w: &BigRational, count: usize) -> CoefficientTable {
    let mut c = Vec::with_capacity(count);
    let mut cur = BigRational::one();
    for j in 0..count {
        if j > 0 {
            let jj = rat_int(j as i64);
            let two_j = rat_int(2 * j as i64);
            // (w)_{2j} = (w)_{2j-2} (w + 2j - 2)(w + 2j - 1)
            cur = cur * (w + &two_j - rat_int(2)) * (w + &two_j - BigRational::one()) / (rat_int(4) * jj);
        }
        c.push(cur.clone());
    }
    CoefficientTable {
        p: rat_int(2),
        w: w.clone(),
        c,
    }
}

/// The leading coefficients in closed form, as polynomials in `p` and `w`.
pub fn c1_polynomial(p: &BigRational, w: &BigRational) -> BigRational {
    let two = rat_int(2);
    let twelve = rat_int(12);
    (two.clone() - rat_int(5) * p + &two * p * p - &twelve * w + &twelve * p * w + &twelve * w * w)
        / (rat_int(24) * p)
}

pub fn c2_polynomial(p: &BigRational, w: &BigRational) -> BigRational {
    let terms: [(i64, u32, u32); 15] = [
        (4, 0, 0),
        (28, 1, 0),
        (-87, 2, 0),
        (28, 3, 0),
        (4, 4, 0),
        (48, 0, 1),
        (-216, 1, 1),
        (24, 2, 1),
        (144, 3, 1),
        (-96, 0, 2),
        (-120, 1, 2),
        (480, 2, 2),
        (-96, 0, 3),
        (480, 1, 3),
        (144, 0, 4),
    ];
    let mut acc = BigRational::zero();
    for (k, i, j) in terms {
        acc += rat_int(k) * num_traits::pow(p.clone(), i as usize) * num_traits::pow(w.clone(), j as usize);
    }
    acc / (rat_int(1152) * p * p)
}

/// Leading term of `R` at order `xi`: `(1/2){alpha(alpha-1) kappa/p - vartheta(vartheta-1)}`.
pub fn r1_closed_form(p: &BigRational, w: &BigRational) -> BigRational {
    let one = BigRational::one();
    let kappa = p - &one;
    let alpha = &one - w;
    let vartheta = rat(1, 2) - w;
    (&alpha * (&alpha - &one) * kappa / p - &vartheta * (&vartheta - &one)) / rat_int(2)
}
