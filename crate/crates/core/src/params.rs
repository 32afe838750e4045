//! Input validation, regime classification and derived constants.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{as_integer, rat, rat_int, ComplexExt, PrecisionCtx, Real};

/// Validated inputs `(p, w, a)` at a working precision.
#[derive(Clone, Debug)]
pub struct Params<T> {
    pub p: BigRational,
    pub w: BigRational,
    pub a: Complex<T>,
    pub ctx: PrecisionCtx,
}

impl<T: Real> Params<T> {
    pub fn new(p: BigRational, w: BigRational, a: Complex<T>, ctx: PrecisionCtx) -> Result<Self> {
        if !p.is_positive() {
            return Err(Error::InvalidInput(format!("p = {p} must be positive")));
        }
        check_sector(&a)?;
        let zero = T::from_int_ctx(0, &ctx);
        let a = Complex::new(a.re + zero.clone(), a.im + zero);
        Ok(Params { p, w, a, ctx })
    }

    /// Inputs given as exact rationals; `a = a_re + i a_im`.
    pub fn from_rationals(
        p: BigRational,
        w: BigRational,
        a_re: &BigRational,
        a_im: &BigRational,
        ctx: PrecisionCtx,
    ) -> Result<Self> {
        let a = Complex::new(T::from_rational_ctx(a_re, &ctx), T::from_rational_ctx(a_im, &ctx));
        Params::new(p, w, a, ctx)
    }

    /// Convenience constructor; `f64` values are converted exactly.
    pub fn from_f64(p: f64, w: f64, a: f64, ctx: PrecisionCtx) -> Result<Self> {
        let p = crate::scalar::rational_from_f64(p)?;
        let w = crate::scalar::rational_from_f64(w)?;
        let a_re = crate::scalar::rational_from_f64(a)?;
        Params::from_rationals(p, w, &a_re, &BigRational::zero(), ctx)
    }

    pub fn classification(&self) -> Result<Classification> {
        classify(&self.p, &self.w)
    }

    pub fn derive(&self) -> Result<DerivedParams<T>> {
        derive(&self.p, &self.w, &self.a, &self.ctx)
    }

    pub fn a_is_real(&self) -> bool {
        self.a.im.is_zero()
    }

    /// Same parameters with `a` conjugated.
    pub fn conj(&self) -> Self {
        Params {
            a: self.a.conj(),
            ..self.clone()
        }
    }
}

/// Rejects `a = 0` and `|arg a| >= pi/2`.
pub fn check_sector<T: Real>(a: &Complex<T>) -> Result<()> {
    if !a.re.is_finite() || !a.im.is_finite() {
        return Err(Error::InvalidInput("a must be finite".into()));
    }
    if a.re.is_zero() && a.im.is_zero() {
        return Err(Error::InvalidInput("a must be nonzero".into()));
    }
    if !(a.re > a.re.integer(0)) {
        return Err(Error::Sector {
            arg: a.arg().to_f64().abs(),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `0 < p < 1`: the algebraic series converges to the sum.
    Convergent,
    /// `p = 1`: the algebraic series converges for `|a| < 2 pi`.
    BoundaryP1,
    /// `p > 1` without the even/even structure: algebraic expansion only.
    AlgebraicOnly,
    /// `p` even and `w` an even nonnegative integer.
    EvenEven,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Convergent => "convergent",
            Regime::BoundaryP1 => "boundary_p1",
            Regime::AlgebraicOnly => "algebraic_only",
            Regime::EvenEven => "even_even",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Classification {
    pub regime: Regime,
    /// `M` when `w = p M + 1`.
    pub double_pole: Option<u64>,
}

fn even_integer(r: &BigRational) -> Option<BigInt> {
    as_integer(r).filter(|n| n.is_even())
}

pub fn classify(p: &BigRational, w: &BigRational) -> Result<Classification> {
    if !p.is_positive() {
        return Err(Error::InvalidInput(format!("p = {p} must be positive")));
    }
    let one = BigRational::one();
    let regime = if *p < one {
        Regime::Convergent
    } else if *p == one {
        Regime::BoundaryP1
    } else {
        let p_even = even_integer(p).is_some();
        let w_even = even_integer(w).is_some_and(|n| !n.is_negative());
        if p_even && w_even {
            Regime::EvenEven
        } else {
            Regime::AlgebraicOnly
        }
    };
    let m = (w - &one) / p;
    let double_pole = as_integer(&m).filter(|m| !m.is_negative()).and_then(|m| m.to_u64());
    Ok(Classification { regime, double_pole })
}

/// Nearest integer with `[x] = n` for `x` in `(n - 1/2, n + 1/2]`.
pub fn nearest_integer(x: &BigRational) -> BigInt {
    (x - rat(1, 2)).ceil().to_integer()
}

/// Number of the `E_r` expansions with `r < N`, as a function of `p`.
pub fn expansion_count(p: &BigRational) -> u32 {
    let n = nearest_integer(&(p / rat_int(4))).to_u32().unwrap_or(0);
    n + u32::from(*p == rat_int(4 * n as i64 + 2))
}

/// Constants shared by the exponentially small expansions (requires `p > 1`).
#[derive(Clone, Debug)]
pub struct DerivedParams<T> {
    pub p: BigRational,
    pub w: BigRational,
    pub kappa: BigRational,
    pub h: T,
    pub vartheta: BigRational,
    pub big_a: T,
    pub q: BigRational,
    pub s0: BigRational,
    pub big_k: BigInt,
    pub big_n: u32,
    pub p_star: BigRational,
    pub delta_pp: bool,
    pub chi: Complex<T>,
    pub x: Complex<T>,
}

impl<T: Real> DerivedParams<T> {
    /// `psi_r = (p/2 - 2r - 1)/kappa` for `r < N`, `psi_N = 0`.
    pub fn psi(&self, r: u32) -> BigRational {
        if r >= self.big_n {
            return BigRational::zero();
        }
        (&self.p / rat_int(2) - rat_int(2 * r as i64 + 1)) / &self.kappa
    }

    /// `lambda_j = 1 + (w + p (j - 1/2)) / kappa`.
    pub fn lambda(&self, j: usize) -> BigRational {
        BigRational::one() + (&self.w + &self.p * (rat_int(j as i64) - rat(1, 2))) / &self.kappa
    }

    /// Number of exponential expansions, `N + delta_{p p*}`.
    pub fn expansion_count(&self) -> u32 {
        self.big_n + u32::from(self.delta_pp)
    }
}

pub fn derive<T: Real>(
    p: &BigRational,
    w: &BigRational,
    a: &Complex<T>,
    ctx: &PrecisionCtx,
) -> Result<DerivedParams<T>> {
    if *p <= BigRational::one() {
        return Err(Error::InvalidInput(format!(
            "p = {p} must exceed 1 for the exponentially small expansions"
        )));
    }
    check_sector(a)?;
    let kappa = p - BigRational::one();
    let vartheta = rat(1, 2) - w;
    let q = p / &kappa;
    let s0 = (w - BigRational::one()) / p;
    let big_k = (w / p).floor().to_integer();
    let big_n = nearest_integer(&(p / rat_int(4)))
        .to_u32()
        .ok_or_else(|| Error::InvalidInput(format!("p = {p} is too large")))?;
    let p_star = rat_int(4 * big_n as i64 + 2);
    let delta_pp = *p == p_star;

    let pr = T::from_rational_ctx(p, ctx);
    let kr = T::from_rational_ctx(&kappa, ctx);
    let tr = T::from_rational_ctx(&vartheta, ctx);
    let two_pi = T::pi_ctx(ctx) * T::from_int_ctx(2, ctx);
    let h = (-(pr.clone() * pr.ln())).exp();
    let half = T::from_f64_ctx(0.5, ctx);
    let big_a = two_pi.sqrt() * kr.powf(&(half - tr.clone())) * pr.powf(&tr);
    let a = Complex::new(a.re.clone() + kr.integer(0), a.im.clone() + kr.integer(0));
    let chi = Complex::from_real(two_pi.powf(&pr)) / a;
    let x = chi.scale(h.clone()).powr(&kr.recip()).scale(kr.clone());
    Ok(DerivedParams {
        p: p.clone(),
        w: w.clone(),
        kappa,
        h,
        vartheta,
        big_a,
        q,
        s0,
        big_k,
        big_n,
        p_star,
        delta_pp,
        chi,
        x,
    })
}
