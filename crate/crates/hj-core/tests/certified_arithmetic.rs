//! Soundness checks for the directed dyadic interval layer: every enclosure
//! produced by `IntervalCtx` must contain the exact rational value of the
//! expression it models, at every intermediate step.

use hj_core::bound::{epsilon, final_margin};
use hj_core::interval::{Dyadic, IntervalCtx, IntervalValue};
use hj_core::nums::{ratio, rational_from_decimal};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

fn leaf(rng: &mut ChaCha8Rng) -> BigRational {
    let num = (rng.next_u64() % 19) as i64 - 9;
    let den = 1 + (rng.next_u64() % 9) as i64;
    ratio(num, den)
}

fn nonzero_leaf(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let r = leaf(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

fn abs(r: &BigRational) -> BigRational {
    if r < &BigRational::zero() {
        -r.clone()
    } else {
        r.clone()
    }
}

/// The enclosure sits inside a 10^-digits box around the reference decimal.
/// References are finite decimal truncations, so plain containment of the
/// reference value is the wrong test once the enclosure gets narrower than
/// the truncation error.
fn assert_within(iv: &IntervalValue, reference: &str, digits: u32) {
    let r = rational_from_decimal(reference);
    let delta = ratio(1, 10).pow(digits as i32);
    assert!(
        iv.lo.to_rational() >= &r - &delta && iv.hi.to_rational() <= &r + &delta,
        "enclosure strays past {} at 1e-{}",
        reference,
        digits
    );
}

/// Random expression trees evaluated twice: once through the interval
/// context, once exactly over the rationals. The interval must bracket the
/// exact value after every operation.
#[test]
fn random_expression_trees_stay_sound() {
    let ctx = IntervalCtx::new(96);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1DEA);
    let ulp_bound = ratio(1, 2).pow(64);
    for _ in 0..2500 {
        let mut r = leaf(&mut rng);
        let mut iv = ctx.from_rational(&r);
        assert!(iv.contains_rational(&r));
        for _ in 0..4 {
            let op = rng.next_u64() % 7;
            match op {
                0 => {
                    let s = leaf(&mut rng);
                    iv = ctx.add(&iv, &ctx.from_rational(&s));
                    r += s;
                }
                1 => {
                    let s = leaf(&mut rng);
                    iv = ctx.sub(&iv, &ctx.from_rational(&s));
                    r -= s;
                }
                2 => {
                    let s = leaf(&mut rng);
                    iv = ctx.mul(&iv, &ctx.from_rational(&s));
                    r *= s;
                }
                3 => {
                    let s = nonzero_leaf(&mut rng);
                    iv = ctx.div(&iv, &ctx.from_rational(&s));
                    r /= s;
                }
                4 => {
                    let s = leaf(&mut rng);
                    iv = ctx.scale(&iv, &s);
                    r *= s;
                }
                5 if !iv.lo.is_negative() => {
                    let e = rng.next_u64() % 5;
                    iv = ctx.powi(&iv, e);
                    r = r.pow(e as i32);
                }
                6 if !iv.lo.is_negative() => {
                    let s = ctx.sqrt(&iv);
                    iv = ctx.mul(&s, &s);
                }
                _ => {
                    let s = leaf(&mut rng);
                    iv = ctx.add(&iv, &ctx.from_rational(&s));
                    r += s;
                }
            }
            assert!(iv.contains_rational(&r), "lost {} after op {}", r, op);
        }
        let slack = (BigRational::one() + abs(&r)) * &ulp_bound;
        assert!(iv.width().to_rational() <= slack, "width blowup at {}", r);
    }
}

/// sqrt stays sound on perfect squares and on arbitrary nonnegative
/// rationals, in the only sense available to it: squaring the enclosure
/// recovers the operand.
#[test]
fn square_root_squared_recovers_operand() {
    let ctx = IntervalCtx::new(128);
    for v in 0..60i64 {
        let sq = ctx.from_rational(&ratio(v * v, 1));
        let root = ctx.sqrt(&sq);
        assert!(root.contains_rational(&ratio(v, 1)), "sqrt({})", v * v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..500 {
        let r = abs(&leaf(&mut rng));
        let root = ctx.sqrt(&ctx.from_rational(&r));
        let back = ctx.mul(&root, &root);
        assert!(back.contains_rational(&r), "sqrt round trip at {}", r);
    }
}

/// Constants recomputed at growing precision nest inside their coarse
/// versions and shrink in width.
#[test]
fn enclosures_nest_as_precision_grows() {
    let mut prev_pi: Option<IntervalValue> = None;
    let mut prev_exp: Option<IntervalValue> = None;
    for prec in [64u32, 128, 256] {
        let ctx = IntervalCtx::new(prec);
        let pi = ctx.pi();
        let exp = ctx.exp_neg_eighth();
        assert_within(
            &pi,
            "3.14159265358979323846264338327950288419716939937510",
            16,
        );
        assert_within(
            &exp,
            "0.88249690258459540286489214322905073622200482499065",
            16,
        );
        if let Some(p) = &prev_pi {
            assert!(p.lo <= pi.lo && pi.hi <= p.hi);
            assert!(pi.width() < p.width());
        }
        if let Some(p) = &prev_exp {
            assert!(p.lo <= exp.lo && exp.hi <= p.hi);
            assert!(exp.width() < p.width());
        }
        prev_pi = Some(pi);
        prev_exp = Some(exp);
    }
}

/// Decimal rendering is directed: rounding down never exceeds the value,
/// rounding up never undershoots it.
#[test]
fn directed_decimal_rendering_brackets_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for _ in 0..400 {
        let mant = BigInt::from(rng.next_u64() as i64);
        let exp = (rng.next_u64() % 120) as i64 - 60;
        let d = Dyadic::new(mant, exp);
        let exact = d.to_rational();
        for sig in [4u32, 12, 30] {
            let down = rational_from_decimal(&d.to_decimal(sig, false));
            let up = rational_from_decimal(&d.to_decimal(sig, true));
            assert!(down <= exact, "down {} vs {}", down, exact);
            assert!(exact <= up, "up {} vs {}", up, exact);
        }
    }
    assert_eq!(
        Dyadic::zero().to_decimal(8, false),
        Dyadic::zero().to_decimal(8, true)
    );
}

/// The headline enclosures recomputed at 512 bits still bracket the frozen
/// reference digits and nest inside the production-precision versions.
#[test]
fn margin_enclosures_sharpen_at_high_precision() {
    let eps_lo = epsilon(100_000_000_000, 368, 192);
    let eps_hi = epsilon(100_000_000_000, 368, 512);
    let eps_ref = "2.785538309435647187341803156289557483691e-3";
    assert_within(&eps_lo, eps_ref, 38);
    assert_within(&eps_hi, eps_ref, 38);
    assert!(eps_lo.lo <= eps_hi.lo && eps_hi.hi <= eps_lo.hi);

    let m_lo = final_margin(100_000_000_000, 368, 192).unwrap();
    let m_hi = final_margin(100_000_000_000, 368, 512).unwrap();
    let m_ref = "3.773660966225640540299252526428871311839e-3";
    assert_within(&m_lo, m_ref, 38);
    assert_within(&m_hi, m_ref, 38);
    assert!(m_lo.lo <= m_hi.lo && m_hi.hi <= m_lo.hi);
    assert!(m_hi.strictly_positive());
}
