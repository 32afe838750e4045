use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use ejasym_core::coeffgen::{c1_polynomial, c2_polynomial, coefficients_in};
use ejasym_core::expansions::{
    algebraic_part, evaluate, theorem1_exponential, theorem2_exponential, EvalOptions, Truncation,
};
use ejasym_core::oracle::{direct_sum, OracleOptions};
use ejasym_core::params::{expansion_count, Params};
use ejasym_core::special::{bernoulli, gamma, riemann_zeta, stirling_coefficients, zeta_nonpositive_int};
use ejasym_core::{BigReal, ComplexExt, PrecisionCtx, Real};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn big(x: f64, ctx: &PrecisionCtx) -> BigReal {
    BigReal::from_f64_ctx(x, ctx)
}

/// Rationals `n/d` with `lo <= n/d <= hi` and small denominators.
fn rational(lo: i64, hi: i64) -> impl Strategy<Value = BigRational> {
    (1i64..=12).prop_flat_map(move |d| (lo * d..=hi * d).prop_map(move |n| q(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gamma_recurrence(x in 0.05f64..30.0) {
        let ctx = PrecisionCtx::new(40);
        let x = big(x, &ctx);
        let lhs = gamma(&(x.clone() + BigReal::from_int_ctx(1, &ctx)), &ctx).unwrap();
        let rhs = x.clone() * gamma(&x, &ctx).unwrap();
        prop_assert!(((lhs - rhs.clone()) / rhs).log10_abs() < -37.0);
    }

    #[test]
    fn zeta_functional_equation(s in 1.05f64..9.0) {
        prop_assume!((s - s.round()).abs() > 1e-3);
        let ctx = PrecisionCtx::new(40);
        let sv = big(s, &ctx);
        let one = BigReal::from_int_ctx(1, &ctx);
        let two_pi = BigReal::pi_ctx(&ctx) * BigReal::from_int_ctx(2, &ctx);
        let lhs = riemann_zeta(&(one - sv.clone()), &ctx).unwrap();
        let half_pi_s = BigReal::pi_ctx(&ctx) * sv.clone() / BigReal::from_int_ctx(2, &ctx);
        let rhs = BigReal::from_int_ctx(2, &ctx) * two_pi.powf(&-sv.clone()) * half_pi_s.cos()
            * gamma(&sv, &ctx).unwrap() * riemann_zeta(&sv, &ctx).unwrap();
        prop_assert!((lhs - rhs.clone()).abs().log10_abs() - rhs.abs().log10_abs() < -35.0);
    }

    #[test]
    fn inverse_ratio_of_p_and_q(p in rational(1, 12)) {
        prop_assume!(p > BigRational::one());
        let ctx = PrecisionCtx::new(20);
        let params: Params<BigReal> = Params::from_rationals(p.clone(), q(2, 1), &q(1, 10), &BigRational::zero(), ctx).unwrap();
        let d = params.derive().unwrap();
        prop_assert_eq!(BigRational::one() / &d.p + BigRational::one() / &d.q, BigRational::one());
        prop_assert_eq!(&d.kappa + BigRational::one(), p);
    }

    #[test]
    fn first_two_coefficients_are_the_polynomials(p in rational(1, 8), w in rational(-5, 6)) {
        prop_assume!(p > BigRational::one());
        let c = coefficients_in(&p, &w, 3).unwrap();
        prop_assert_eq!(&c[0], &BigRational::one());
        prop_assert_eq!(&c[1], &c1_polynomial(&p, &w));
        prop_assert_eq!(&c[2], &c2_polynomial(&p, &w));
    }

    #[test]
    fn conjugate_symmetry(pw in prop::sample::select(vec![(2i64, 2i64), (4, 2), (4, 4), (6, 2)]),
                          re in 0.05f64..0.5, im in -0.3f64..0.3) {
        let ctx = PrecisionCtx::new(30);
        let a = Complex::new(big(re, &ctx), big(im, &ctx));
        let params = Params::new(q(pw.0, 1), q(pw.1, 1), a, ctx).unwrap();
        let opts = EvalOptions { truncation: Truncation::Fixed(6), ..EvalOptions::default() };
        let v = evaluate(&params, &opts).unwrap().total;
        let vc = evaluate(&params.conj(), &opts).unwrap().total;
        let d = ComplexExt::abs(&(v.conj() - vc));
        prop_assert!(d.log10_abs() - ComplexExt::abs(&v).log10_abs() < -27.0);
    }

    #[test]
    fn real_and_complex_forms_agree(pw in prop::sample::select(vec![(2i64, 2i64), (2, 4), (4, 2), (6, 4)]),
                                    a in 0.02f64..1.0, m in 1usize..10) {
        let ctx = PrecisionCtx::new(40);
        let params = Params::new(q(pw.0, 1), q(pw.1, 1), Complex::from_real(big(a, &ctx)), ctx).unwrap();
        let t1 = theorem1_exponential(&params, m).unwrap();
        let t2 = theorem2_exponential(&params, m, None).unwrap();
        for (e1, e2) in t1.iter().zip(&t2) {
            prop_assert!(e1.sum.im.abs().log10_abs() - e1.terms[0].magnitude.log10_abs() < -35.0);
            for (x, y) in e1.terms.iter().zip(&e2.terms) {
                let d = ComplexExt::abs(&(x.value.clone() - y.value.clone()));
                prop_assert!(d.log10_abs() - e1.terms[0].magnitude.log10_abs() < -35.0);
            }
        }
    }

    #[test]
    fn convergent_expansion_is_exact(p in prop::sample::select(vec![q(1, 2), q(2, 3), q(3, 4)]),
                                     w in rational(-2, 3), a in 1.0f64..2.5) {
        let ctx = PrecisionCtx::new(30);
        let params = Params::new(p, w, Complex::from_real(big(a, &ctx)), ctx).unwrap();
        let tol = ctx.tolerance::<BigReal>() / BigReal::from_int_ctx(100, &ctx);
        let o = direct_sum(&params.p, &params.w, &params.a, &ctx, &tol).unwrap();
        let e = algebraic_part(&params, 0).unwrap();
        prop_assert!(ComplexExt::abs(&(o.value - e.sum)).log10_abs() < -25.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn oracle_tail_bound_is_honest(p in 0.5f64..4.0, w in -2.0f64..4.0, a in 0.3f64..3.0) {
        let ctx = PrecisionCtx::new(20);
        let pr = ejasym_core::scalar::rational_from_f64(p).unwrap();
        let wr = ejasym_core::scalar::rational_from_f64(w).unwrap();
        let av = Complex::from_real(big(a, &ctx));
        let tol = big(1e-10, &ctx);
        let coarse = direct_sum(&pr, &wr, &av, &ctx, &tol).unwrap();
        let fine = direct_sum(&pr, &wr, &av, &ctx, &(tol / BigReal::from_int_ctx(100, &ctx))).unwrap();
        prop_assert!(ComplexExt::abs(&(coarse.value - fine.value)) <= coarse.tail_bound);
    }
}

#[test]
fn zeta_at_negative_odd_integers() {
    for k in 1..=30u64 {
        let b = bernoulli(2 * k as usize);
        let want = -b / q(2 * k as i64, 1);
        assert_eq!(zeta_nonpositive_int(2 * k - 1), want, "k = {k}");
    }
    assert_eq!(zeta_nonpositive_int(0), q(-1, 2));
}

#[test]
fn stirling_prefixes_are_stable() {
    let long = stirling_coefficients(40);
    for m in [1, 5, 17, 39] {
        assert_eq!(stirling_coefficients(m)[..], long[..m]);
    }
    assert_eq!(long[1], q(-1, 12));
}

#[test]
fn expansion_count_grows_every_four() {
    for p in (2..=36).step_by(2) {
        let now = expansion_count(&q(p, 1));
        let later = expansion_count(&q(p + 4, 1));
        assert_eq!(later, now + 1, "p = {p}");
    }
    assert_eq!(expansion_count(&q(2, 1)), 1);
    assert_eq!(expansion_count(&q(6, 1)), 2);
}

#[test]
fn psi_decreases_inside_the_sector() {
    let ctx = PrecisionCtx::new(20);
    for p in (2..=40).step_by(2) {
        let params = Params::new(q(p, 1), q(2, 1), Complex::from_real(big(0.1, &ctx)), ctx).unwrap();
        let d = params.derive().unwrap();
        let psis: Vec<_> = (0..d.expansion_count()).map(|r| d.psi(r)).collect();
        assert!(psis.windows(2).all(|w| w[0] > w[1]), "p = {p}: {psis:?}");
        for (r, psi) in psis.iter().enumerate() {
            assert!(*psi < q(1, 2) && (*psi > BigRational::zero() || r as u32 == d.big_n), "p = {p}");
        }
    }
}

#[test]
fn alternating_oracle_matches_closed_form() {
    let ctx = PrecisionCtx::new(30);
    let opts = OracleOptions { alternating: true, ..OracleOptions::default() };
    let a = Complex::from_real(big(0.7, &ctx));
    let v = ejasym_core::oracle::direct_sum_with(&q(1, 1), &q(0, 1), &a, &ctx, &ctx.tolerance(), opts).unwrap();
    let e = big(0.7, &ctx).exp();
    let want = -(e + BigReal::from_int_ctx(1, &ctx)).recip();
    assert!((v.value.re - want).abs().log10_abs() < -29.0);
}
