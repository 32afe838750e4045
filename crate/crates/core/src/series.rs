//! Truncated formal power series `d_0 + d_1 x + ... + d_{n-1} x^{n-1}`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeries<F> {
    coeffs: Vec<F>,
}

impl<F: Field> FormalSeries<F> {
    /// Series with the given coefficients; its order is `coeffs.len()`.
    pub fn new(coeffs: Vec<F>) -> Self {
        assert!(!coeffs.is_empty(), "a formal series needs order >= 1");
        FormalSeries { coeffs }
    }

    pub fn zero(order: usize, like: &F) -> Self {
        FormalSeries::new(vec![like.integer(0); order.max(1)])
    }

    pub fn one(order: usize, like: &F) -> Self {
        let mut s = Self::zero(order, like);
        s.coeffs[0] = like.integer(1);
        s
    }

    /// The series `x`.
    pub fn variable(order: usize, like: &F) -> Self {
        let mut s = Self::zero(order, like);
        if order > 1 {
            s.coeffs[1] = like.integer(1);
        }
        s
    }

    /// Builds `sum f(k) x^k` for `k < order`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> F) -> Self {
        FormalSeries::new((0..order.max(1)).map(f).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &F {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    fn like(&self) -> &F {
        &self.coeffs[0]
    }

    /// Same series at a different truncation order (zero-padded).
    pub fn truncate(&self, order: usize) -> Self {
        let z = self.like().integer(0);
        Self::from_fn(order, |k| self.coeffs.get(k).cloned().unwrap_or_else(|| z.clone()))
    }

    pub fn scale(&self, c: &F) -> Self {
        FormalSeries::new(self.coeffs.iter().map(|d| d.clone() * c.clone()).collect())
    }

    /// `f(c x)`.
    pub fn dilate(&self, c: &F) -> Self {
        let mut pow = self.like().integer(1);
        let mut out = Vec::with_capacity(self.order());
        for d in &self.coeffs {
            out.push(d.clone() * pow.clone());
            pow = pow * c.clone();
        }
        FormalSeries::new(out)
    }

    /// `x^k f(x)`, truncated to the same order.
    pub fn shift(&self, k: usize) -> Self {
        let z = self.like().integer(0);
        Self::from_fn(self.order(), |i| {
            if i < k {
                z.clone()
            } else {
                self.coeffs[i - k].clone()
            }
        })
    }

    pub fn mul_series(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![self.like().integer(0); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        FormalSeries::new(out)
    }

    /// `1 / f`; requires `d_0 != 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let d0 = self.coeffs[0].clone();
        if d0.is_zero() {
            return Err(Error::InvalidInput(
                "reciprocal of a series with zero constant term".into(),
            ));
        }
        let n = self.order();
        let inv0 = d0.integer(1) / d0;
        let mut out: Vec<F> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut s = self.like().integer(0);
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    s = s + self.coeffs[i].clone() * out[k - i].clone();
                }
            }
            out.push(-(s * inv0.clone()));
        }
        Ok(FormalSeries::new(out))
    }

    /// `exp f`; requires `d_0 = 0`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidInput(
                "exp of a series with nonzero constant term".into(),
            ));
        }
        let n = self.order();
        let like = self.like();
        let mut out: Vec<F> = Vec::with_capacity(n);
        out.push(like.integer(1));
        // n e_n = sum_{k=1}^n k d_k e_{n-k}
        for m in 1..n {
            let mut s = like.integer(0);
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s = s + like.integer(k as i64) * self.coeffs[k].clone() * out[m - k].clone();
                }
            }
            out.push(s / like.integer(m as i64));
        }
        Ok(FormalSeries::new(out))
    }

    /// `log f`; requires `d_0 = 1`.
    pub fn log(&self) -> Result<Self> {
        let like = self.like();
        if self.coeffs[0] != like.integer(1) {
            return Err(Error::InvalidInput(
                "log of a series whose constant term is not 1".into(),
            ));
        }
        let n = self.order();
        let mut out: Vec<F> = Vec::with_capacity(n);
        out.push(like.integer(0));
        // m l_m = m d_m - sum_{k=1}^{m-1} k l_k d_{m-k}
        for m in 1..n {
            let mut s = like.integer(m as i64) * self.coeffs[m].clone();
            for k in 1..m {
                if !out[k].is_zero() && !self.coeffs[m - k].is_zero() {
                    s = s - like.integer(k as i64) * out[k].clone() * self.coeffs[m - k].clone();
                }
            }
            out.push(s / like.integer(m as i64));
        }
        Ok(FormalSeries::new(out))
    }

    /// `f(g(x))`; requires `g_0 = 0`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::InvalidInput(
                "composition with a series that has a nonzero constant term".into(),
            ));
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::zero(n, self.like());
        for d in self.coeffs.iter().take(n).rev() {
            acc = acc.mul_series(&g);
            acc.coeffs[0] = acc.coeffs[0].clone() + d.clone();
        }
        Ok(acc)
    }
}

impl<F: Field> Add for &FormalSeries<F> {
    type Output = FormalSeries<F>;
    fn add(self, rhs: &FormalSeries<F>) -> FormalSeries<F> {
        let n = self.order().min(rhs.order());
        FormalSeries::from_fn(n, |k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
    }
}

impl<F: Field> Sub for &FormalSeries<F> {
    type Output = FormalSeries<F>;
    fn sub(self, rhs: &FormalSeries<F>) -> FormalSeries<F> {
        let n = self.order().min(rhs.order());
        FormalSeries::from_fn(n, |k| self.coeffs[k].clone() - rhs.coeffs[k].clone())
    }
}

impl<F: Field> Mul for &FormalSeries<F> {
    type Output = FormalSeries<F>;
    fn mul(self, rhs: &FormalSeries<F>) -> FormalSeries<F> {
        self.mul_series(rhs)
    }
}

impl<F: Field> Neg for &FormalSeries<F> {
    type Output = FormalSeries<F>;
    fn neg(self) -> FormalSeries<F> {
        FormalSeries::new(self.coeffs.iter().map(|d| -d.clone()).collect())
    }
}
