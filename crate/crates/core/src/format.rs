//! Decimal parsing and rendering.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Parses a decimal literal (`-12.5`, `3e-4`, `1.0E+2`) to an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("{s:?} is not a decimal number"));
    let t = s.trim();
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.as_bytes().first() {
        Some(b'-') => (true, &mant[1..]),
        Some(b'+') => (false, &mant[1..]),
        _ => (false, mant),
    };
    let (int, frac) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let scale = exp as i64 - frac.len() as i64;
    if scale.abs() > 100_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    let mut r = if scale >= 0 {
        BigRational::from_integer(n * pow)
    } else {
        BigRational::new(n, pow)
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Parses `x`, `yi`, `x+yi` or `x-yi` into exact real and imaginary parts.
pub fn parse_complex(s: &str) -> Result<(BigRational, BigRational)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok((parse_decimal(&t)?, BigRational::zero()));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |s: &str| -> Result<BigRational> {
        match s {
            "" | "+" => Ok(BigRational::one()),
            "-" => Ok(-BigRational::one()),
            _ => parse_decimal(s),
        }
    };
    match split {
        Some(i) => Ok((parse_decimal(&body[..i])?, imag(&body[i..])?)),
        None => Ok((BigRational::zero(), imag(body)?)),
    }
}

/// Decimal mantissa digits and exponent of `x` rounded to `digits`
/// significant figures. Returns `None` for zero or non-finite values.
pub fn decimal_digits<T: Real>(x: &T, digits: usize) -> Option<(bool, String, i64)> {
    if !x.is_finite() || x.is_zero() {
        return None;
    }
    let digits = digits.max(1);
    let neg = x.is_negative();
    let ax = x.abs();
    let mut e = ax.log10_abs().floor() as i64;
    let ten = ax.integer(10);
    for _ in 0..3 {
        let shift = digits as i64 - 1 - e;
        let scaled = if shift >= 0 {
            ax.clone() * ten.powi(shift as i32)
        } else {
            ax.clone() / ten.powi((-shift) as i32)
        };
        let m = scaled.round_to_bigint()?.to_string();
        if m.len() == digits {
            return Some((neg, m, e));
        }
        if m.len() > digits {
            if m.len() == digits + 1 && m.ends_with('0') && m.starts_with("10") {
                // rounding carried into a new digit
                return Some((neg, m[..digits].to_string(), e + 1));
            }
            e += 1;
        } else {
            e -= 1;
        }
    }
    None
}

/// Scientific notation `-1.2345e-10` with `digits` significant figures.
pub fn format_sci<T: Real>(x: &T, digits: usize) -> String {
    if !x.is_finite() {
        return if x.to_f64().is_nan() {
            "NaN".into()
        } else if x.is_negative() {
            "-inf".into()
        } else {
            "inf".into()
        };
    }
    match decimal_digits(x, digits) {
        None => "0".into(),
        Some((neg, m, e)) => {
            let sign = if neg { "-" } else { "" };
            if m.len() == 1 {
                format!("{sign}{m}e{e}")
            } else {
                format!("{sign}{}.{}e{e}", &m[..1], &m[1..])
            }
        }
    }
}

/// How the exponent is written in `x(y)` notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpStyle {
    /// `1.395833(0)`, `3.348999(6)`.
    Plain,
    /// `8.146(-06)`: negative exponents padded to two digits.
    Padded,
}

/// Renders `x` as `m(y)`, meaning `m × 10^y`.
pub fn format_paper<T: Real>(x: &T, digits: usize, style: ExpStyle) -> String {
    match decimal_digits(x, digits) {
        None => "0".into(),
        Some((neg, m, e)) => {
            let sign = if neg { "-" } else { "" };
            let mant = if m.len() == 1 {
                m.clone()
            } else {
                format!("{}.{}", &m[..1], &m[1..])
            };
            let exp = match style {
                ExpStyle::Padded if e < 0 => format!("-{:02}", -e),
                _ => e.to_string(),
            };
            format!("{sign}{mant}({exp})")
        }
    }
}

/// Parses a number written in `m(y)` notation back to `f64`.
pub fn parse_paper(s: &str) -> Option<f64> {
    let s = s.trim();
    let open = s.find('(')?;
    let close = s.rfind(')')?;
    let m: f64 = s[..open].parse().ok()?;
    let e: i32 = s[open + 1..close].parse().ok()?;
    Some(m * 10f64.powi(e))
}

/// `|a - b| / |b|` for nonzero `b`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
