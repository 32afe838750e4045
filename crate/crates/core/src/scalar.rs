//! Scalar abstraction.
//!
//! Every numeric routine in this crate is written against [`Real`], which is
//! implemented for `f64` and for the arbitrary-precision [`BigReal`](crate::BigReal).
//! Exact coefficient work uses [`Field`], implemented for `BigRational` and
//! for every `Real`.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in decimal digits plus internal guard digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionCtx {
    working_digits: u32,
    guard_digits: u32,
}

impl PrecisionCtx {
    pub const MIN_WORKING_DIGITS: u32 = 15;
    pub const MIN_GUARD_DIGITS: u32 = 10;

    /// Context with `working_digits` (raised to at least 15) and the default
    /// guard of `max(10, working_digits / 10)` digits.
    pub fn new(working_digits: u32) -> Self {
        let working_digits = working_digits.max(Self::MIN_WORKING_DIGITS);
        PrecisionCtx {
            working_digits,
            guard_digits: (working_digits / 10).max(Self::MIN_GUARD_DIGITS),
        }
    }

    pub fn with_guard(working_digits: u32, guard_digits: u32) -> Result<Self> {
        if working_digits < Self::MIN_WORKING_DIGITS {
            return Err(Error::InvalidInput(format!(
                "working_digits = {working_digits} is below the minimum of {}",
                Self::MIN_WORKING_DIGITS
            )));
        }
        if guard_digits < Self::MIN_GUARD_DIGITS {
            return Err(Error::InvalidInput(format!(
                "guard_digits = {guard_digits} is below the minimum of {}",
                Self::MIN_GUARD_DIGITS
            )));
        }
        Ok(PrecisionCtx {
            working_digits,
            guard_digits,
        })
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn total_digits(&self) -> u32 {
        self.working_digits + self.guard_digits
    }

    /// Binary precision used for internal computation.
    pub fn bits(&self) -> usize {
        (self.total_digits() as f64 * LOG2_10).ceil() as usize + 2
    }

    /// `10^-working_digits`, the target accuracy of results.
    pub fn tolerance<T: Real>(&self) -> T {
        T::from_int_ctx(10, self).powi(-(self.working_digits as i32))
    }

    /// Same guard policy, at least `working_digits` digits.
    pub fn at_least(&self, working_digits: u32) -> Self {
        if working_digits <= self.working_digits {
            *self
        } else {
            PrecisionCtx::new(working_digits)
        }
    }
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        PrecisionCtx::new(30)
    }
}

/// A field whose elements can embed small integers.
///
/// For floating types the embedded integer carries the precision of `self`,
/// so `x.integer(1) / x.integer(3)` is as accurate as `x`.
pub trait Field: Clone + fmt::Debug + Num + Neg<Output = Self> {
    fn integer(&self, n: i64) -> Self;

    fn ratio(&self, num: i64, den: i64) -> Self {
        self.integer(num) / self.integer(den)
    }
}

impl Field for BigRational {
    fn integer(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Real scalar with the transcendental functions the expansions need.
pub trait Real: Field + PartialOrd + fmt::Display + Send + Sync + 'static {
    /// Binary precision carried by this value.
    fn bits(&self) -> usize;

    fn from_f64_bits(x: f64, bits: usize) -> Self;
    fn from_rational_bits(r: &BigRational, bits: usize) -> Self;
    fn pi_bits(bits: usize) -> Self;

    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan(&self) -> Self;
    fn floor(&self) -> Self;
    fn abs(&self) -> Self;
    fn is_finite(&self) -> bool;

    /// Nearest integer, ties away from zero.
    fn round_to_bigint(&self) -> Option<BigInt>;

    /// Nearest `f64`; flushes to zero or infinity outside its range.
    fn to_f64(&self) -> f64;

    /// `log10 |self|` for any magnitude representable by `Self`
    /// (`-inf` for zero).
    fn log10_abs(&self) -> f64;

    // Provided constructors.

    fn from_f64_ctx(x: f64, ctx: &PrecisionCtx) -> Self {
        Self::from_f64_bits(x, ctx.bits())
    }

    fn from_int_ctx(n: i64, ctx: &PrecisionCtx) -> Self {
        Self::from_f64_bits(0.0, ctx.bits()).integer(n)
    }

    fn from_rational_ctx(r: &BigRational, ctx: &PrecisionCtx) -> Self {
        Self::from_rational_bits(r, ctx.bits())
    }

    fn pi_ctx(ctx: &PrecisionCtx) -> Self {
        Self::pi_bits(ctx.bits())
    }

    fn float(&self, x: f64) -> Self {
        Self::from_f64_bits(x, self.bits())
    }

    fn rational(&self, r: &BigRational) -> Self {
        Self::from_rational_bits(r, self.bits())
    }

    fn pi(&self) -> Self {
        Self::pi_bits(self.bits())
    }

    /// `2^-bits`, the unit roundoff at this precision.
    fn epsilon(&self) -> Self {
        self.integer(2).powi(-(self.bits() as i32))
    }

    // Provided functions.

    fn is_negative(&self) -> bool {
        *self < self.integer(0)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn recip(&self) -> Self {
        self.integer(1) / self.clone()
    }

    /// `self^e` for `self > 0`.
    fn powf(&self, e: &Self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        (e.clone() * self.ln()).exp()
    }

    fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = self.integer(1);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    fn tan(&self) -> Self {
        self.sin() / self.cos()
    }

    /// Four-quadrant arctangent of `self / x`, in `(-pi, pi]`.
    fn atan2(&self, x: &Self) -> Self {
        let zero = self.integer(0);
        if *x > zero {
            (self.clone() / x.clone()).atan()
        } else if *x < zero {
            let base = (self.clone() / x.clone()).atan();
            if *self < zero {
                base - self.pi()
            } else {
                base + self.pi()
            }
        } else if *self > zero {
            self.pi() / self.integer(2)
        } else if *self < zero {
            -(self.pi() / self.integer(2))
        } else {
            zero
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// True when `self` is an integer value.
    fn is_integer(&self) -> bool {
        self.is_finite() && self.floor() == *self
    }
}

impl Field for f64 {
    fn integer(&self, n: i64) -> Self {
        n as f64
    }
}

impl Real for f64 {
    fn bits(&self) -> usize {
        53
    }

    fn from_f64_bits(x: f64, _bits: usize) -> Self {
        x
    }

    fn from_rational_bits(r: &BigRational, _bits: usize) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn pi_bits(_bits: usize) -> Self {
        std::f64::consts::PI
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn sin(&self) -> Self {
        f64::sin(*self)
    }

    fn cos(&self) -> Self {
        f64::cos(*self)
    }

    fn atan(&self) -> Self {
        f64::atan(*self)
    }

    fn floor(&self) -> Self {
        f64::floor(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn round_to_bigint(&self) -> Option<BigInt> {
        BigInt::from_f64(f64::round(*self))
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn log10_abs(&self) -> f64 {
        f64::abs(*self).log10()
    }

    fn epsilon(&self) -> Self {
        f64::EPSILON
    }

    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }

    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }

    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
}

/// Principal-branch elementary functions on `Complex<T>`.
pub trait ComplexExt<T: Real> {
    fn from_real(x: T) -> Self;
    fn abs(&self) -> T;
    /// Principal argument in `(-pi, pi]`.
    fn arg(&self) -> T;
    fn cexp(&self) -> Self;
    /// Principal logarithm.
    fn cln(&self) -> Self;
    /// Principal power `exp(e log z)` with a real exponent.
    fn powr(&self, e: &T) -> Self;
    fn cis(theta: &T) -> Self;
}

impl<T: Real> ComplexExt<T> for Complex<T> {
    fn from_real(x: T) -> Self {
        let zero = x.integer(0);
        Complex::new(x, zero)
    }

    fn abs(&self) -> T {
        let (re, im) = (self.re.abs(), self.im.abs());
        if im.is_zero() {
            return re;
        }
        if re.is_zero() {
            return im;
        }
        let (big, small) = if re > im { (re, im) } else { (im, re) };
        let r = small / big.clone();
        big * (r.square() + r.integer(1)).sqrt()
    }

    fn arg(&self) -> T {
        self.im.atan2(&self.re)
    }

    fn cexp(&self) -> Self {
        let m = self.re.exp();
        Complex::new(m.clone() * self.im.cos(), m * self.im.sin())
    }

    fn cln(&self) -> Self {
        Complex::new(ComplexExt::abs(self).ln(), self.arg())
    }

    fn powr(&self, e: &T) -> Self {
        if self.re.is_zero() && self.im.is_zero() {
            return self.clone();
        }
        if self.im.is_zero() && !self.re.is_negative() {
            return Complex::from_real(self.re.powf(e));
        }
        let l = self.cln();
        Complex::new(l.re * e.clone(), l.im * e.clone()).cexp()
    }

    fn cis(theta: &T) -> Self {
        Complex::new(theta.cos(), theta.sin())
    }
}

/// Convert an exact rational to `T` at the precision of `like`.
pub fn rational_to<T: Real>(r: &BigRational, like: &T) -> T {
    like.rational(r)
}

/// `BigRational` from an `f64`, exactly.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidInput(format!("{x} is not a finite number")))
}

/// Exact integer value of `r`, if it is one.
pub fn as_integer(r: &BigRational) -> Option<BigInt> {
    if r.is_integer() {
        Some(r.to_integer())
    } else {
        None
    }
}

pub(crate) fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

