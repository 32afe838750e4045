//! Arbitrary-precision real backed by `astro_float::BigFloat`.
//!
//! Binary operations run at the larger of the two operand precisions, so a
//! low-precision exact constant (e.g. `BigReal::zero()`) never degrades a
//! high-precision operand.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

use crate::format::format_sci;
use crate::scalar::{Field, Real};

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = 64;
/// Precision of constants created without a context (exact small integers).
const BASE_BITS: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

#[derive(Clone)]
pub struct BigReal {
    v: BigFloat,
    bits: usize,
}

impl BigReal {
    pub fn with_bits(v: BigFloat, bits: usize) -> Self {
        BigReal { v, bits }
    }

    pub fn as_bigfloat(&self) -> &BigFloat {
        &self.v
    }

    pub fn from_bigint(n: &BigInt, bits: usize) -> Self {
        let need = (n.bits() as usize).max(bits).max(BASE_BITS);
        let v = with_consts(|cc| BigFloat::parse(&n.to_string(), Radix::Dec, need, RM, cc));
        BigReal { v, bits }
    }

    /// Parses a decimal literal such as `-1.25e-3`.
    pub fn parse(s: &str, bits: usize) -> Option<Self> {
        let v = with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, bits, RM, cc));
        if v.is_nan() {
            None
        } else {
            Some(BigReal { v, bits })
        }
    }

    /// Same value re-rounded to `bits`.
    pub fn to_bits(&self, bits: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(bits, RM).ok();
        BigReal { v, bits }
    }

    fn wrap(&self, v: BigFloat) -> Self {
        BigReal { v, bits: self.bits }
    }

    fn top_word(&self) -> Option<(u64, i32, bool)> {
        let (words, _, sign, e, _) = self.v.as_raw_parts()?;
        let top = *words.last()?;
        if top == 0 {
            return None;
        }
        Some((top, e, sign == Sign::Neg))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                let bits = self.bits.max(rhs.bits);
                BigReal {
                    v: self.v.$call(&rhs.v, bits, RM),
                    bits,
                }
            }
        }

        impl<'a> $tr<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                let bits = self.bits.max(rhs.bits);
                BigReal {
                    v: self.v.$call(&rhs.v, bits, RM),
                    bits,
                }
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Rem for BigReal {
    type Output = BigReal;
    fn rem(self, rhs: BigReal) -> BigReal {
        let bits = self.bits.max(rhs.bits);
        BigReal {
            v: self.v.rem(&rhs.v),
            bits,
        }
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            v: self.v.neg(),
            bits: self.bits,
        }
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.partial_cmp(&other.v)
    }
}

impl Zero for BigReal {
    fn zero() -> Self {
        BigReal {
            v: BigFloat::from_word(0, BASE_BITS),
            bits: BASE_BITS,
        }
    }

    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
}

impl One for BigReal {
    fn one() -> Self {
        BigReal {
            v: BigFloat::from_word(1, BASE_BITS),
            bits: BASE_BITS,
        }
    }
}

impl Num for BigReal {
    type FromStrRadixErr = String;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(format!("unsupported radix {radix}"));
        }
        BigReal::parse(s, BASE_BITS.max((s.len() as f64 * 3.33) as usize + WORD_BITS))
            .ok_or_else(|| format!("cannot parse {s:?}"))
    }
}

impl Field for BigReal {
    fn integer(&self, n: i64) -> Self {
        BigReal {
            v: BigFloat::from_i64(n, self.bits.max(BASE_BITS)),
            bits: self.bits,
        }
    }
}

impl Real for BigReal {
    fn bits(&self) -> usize {
        self.bits
    }

    fn from_f64_bits(x: f64, bits: usize) -> Self {
        BigReal {
            v: BigFloat::from_f64(x, bits.max(BASE_BITS)),
            bits,
        }
    }

    fn from_rational_bits(r: &BigRational, bits: usize) -> Self {
        let num = BigReal::from_bigint(r.numer(), bits);
        if r.denom().is_one() {
            return num;
        }
        let den = BigReal::from_bigint(r.denom(), bits);
        BigReal {
            v: num.v.div(&den.v, bits, RM),
            bits,
        }
    }

    fn pi_bits(bits: usize) -> Self {
        BigReal {
            v: with_consts(|cc| cc.pi(bits, RM)),
            bits,
        }
    }

    fn exp(&self) -> Self {
        self.wrap(with_consts(|cc| self.v.exp(self.bits, RM, cc)))
    }

    fn ln(&self) -> Self {
        self.wrap(with_consts(|cc| self.v.ln(self.bits, RM, cc)))
    }

    fn sqrt(&self) -> Self {
        self.wrap(self.v.sqrt(self.bits, RM))
    }

    fn sin(&self) -> Self {
        self.wrap(with_consts(|cc| self.v.sin(self.bits, RM, cc)))
    }

    fn cos(&self) -> Self {
        self.wrap(with_consts(|cc| self.v.cos(self.bits, RM, cc)))
    }

    fn atan(&self) -> Self {
        self.wrap(with_consts(|cc| self.v.atan(self.bits, RM, cc)))
    }

    fn floor(&self) -> Self {
        self.wrap(self.v.floor())
    }

    fn abs(&self) -> Self {
        self.wrap(self.v.abs())
    }

    fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    fn round_to_bigint(&self) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        if self.v.is_zero() {
            return Some(BigInt::zero());
        }
        let half = BigFloat::from_f64(0.5, BASE_BITS);
        let shifted = if self.v.is_negative() {
            self.v.sub(&half, self.bits.max(BASE_BITS) + WORD_BITS, RM)
        } else {
            self.v.add(&half, self.bits.max(BASE_BITS) + WORD_BITS, RM)
        };
        // truncate toward zero
        let t = shifted.int();
        if t.is_zero() {
            return Some(BigInt::zero());
        }
        let (words, _, sign, e, _) = t.as_raw_parts()?;
        let mut bytes = Vec::with_capacity(words.len() * 8);
        for w in words {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        let m = BigUint::from_bytes_le(&bytes);
        let total = (words.len() * WORD_BITS) as i64;
        let e = e as i64;
        let mag = if e >= total {
            m << ((e - total) as usize)
        } else {
            m >> ((total - e) as usize)
        };
        let mag = BigInt::from(mag);
        Some(if sign == Sign::Neg { -mag } else { mag })
    }

    fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        match self.top_word() {
            None => 0.0,
            Some((top, e, neg)) => {
                let m = top as f64 / 18446744073709551616.0;
                let x = if e > 1100 {
                    f64::INFINITY
                } else if e < -1200 {
                    0.0
                } else {
                    m * 2f64.powi(e)
                };
                if neg {
                    -x
                } else {
                    x
                }
            }
        }
    }

    fn log10_abs(&self) -> f64 {
        if !self.is_finite() {
            return f64::INFINITY;
        }
        match self.top_word() {
            None => f64::NEG_INFINITY,
            Some((top, e, _)) => {
                let m = top as f64 / 18446744073709551616.0;
                (m.log2() + e as f64) * std::f64::consts::LOG10_2
            }
        }
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.bits as f64) * std::f64::consts::LOG10_2) as usize);
        f.write_str(&format_sci(self, digits.max(1)))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({}, {} bits)", format_sci(self, 20), self.bits)
    }
}
