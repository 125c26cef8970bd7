//! Lifting the hypercube pair inequality to [4]^n.
//!
//! Restricting each coordinate to two of the four values embeds [2]^m
//! subcubes into [4]^n. The lifted inequality keeps the hypercube weights on
//! pair types, truncates the low-population types, and pays two certified
//! error terms: a Chernoff tail for the truncation and a central-binomial
//! loss for skipping weights near the middle.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::density::line_census;
use crate::grid::{Coloring, GridPoint};
use crate::interval::{IntervalCtx, IntervalValue};
use crate::nums::{binomial, binomial_count_below, int_ratio, pow2, ratio, ratio_big};
use crate::InputError;

/// Certified enclosure of e^(-(n-κ)/8), the Chernoff bound on the binomial
/// tail Pr[Bin(n-κ, 1/2) < n/4 - κ].
pub fn chernoff_tail(n: u64, kappa: u32, prec: u32) -> IntervalValue {
    assert!((kappa as u64) <= n);
    let m = n - kappa as u64;
    let iv = IntervalCtx::new(prec).exp_neg_eighths(m);
    #[cfg(debug_assertions)]
    if m >= 1 && m <= 40 {
        let cut = ratio(n as i64, 4) - ratio(kappa as i64, 1);
        let tail = ratio_big(binomial_count_below(m, &cut), pow2(m));
        debug_assert!(
            tail <= iv.lo.to_rational(),
            "tail exceeds its Chernoff bound"
        );
    }
    iv
}

/// Exact Pr[Bin(m, 1/2) < cut].
pub fn exact_binomial_tail(m: u64, cut: &BigRational) -> BigRational {
    ratio_big(binomial_count_below(m, cut), pow2(m))
}

/// Certified enclosure of κ·sqrt(2/(π(n-κ))): the mass forfeited by skipping
/// κ weights nearest the middle of the binomial row on n-κ coordinates.
pub fn midskip_loss(n: u64, kappa: u32, prec: u32) -> IntervalValue {
    assert!((kappa as u64) < n);
    if kappa == 0 {
        return IntervalValue::exact_int(0);
    }
    let m = n - kappa as u64;
    let ctx = IntervalCtx::new(prec);
    let pi_m = ctx.scale(&ctx.pi(), &int_ratio(m));
    let root = ctx.sqrt(&ctx.div(&ctx.from_rational(&ratio(2, 1)), &pi_m));
    let iv = ctx.scale(&root, &int_ratio(kappa as u64));
    #[cfg(debug_assertions)]
    if m <= 60 {
        let central = ratio(kappa as i64, 1) * ratio_big(crate::nums::central_binomial(m), pow2(m));
        debug_assert!(
            central <= iv.lo.to_rational(),
            "central mass exceeds sqrt bound"
        );
    }
    iv
}

#[derive(Clone, Debug)]
pub struct Lemma2Report {
    pub n: u32,
    pub kappa: u32,
    pub lhs: BigRational,
    pub chernoff_term: IntervalValue,
    /// Total middle-skip loss, 3κ·sqrt(2/(π(n-κ))).
    pub midskip_term: IntervalValue,
    pub rhs: IntervalValue,
    pub holds: bool,
}

/// The lifted mono-pair inequality on [4]^n for κ ≤ n/4:
/// Σ_{k=1..κ} (κ+1-k)·q(k) ≥ (κ²-1)/4 · (1 - e^(-(n-κ)/8) - 3κ·sqrt(2/(π(n-κ)))).
pub fn lemma2_check(c: &Coloring, kappa: u32, prec: u32) -> Result<Lemma2Report, InputError> {
    assert_eq!(c.t(), 4, "the lift targets the four-value grid");
    let n = c.n();
    if kappa == 0 || kappa * 4 > n {
        return Err(InputError("kappa must satisfy 1 <= kappa <= n/4"));
    }
    let lhs: BigRational = (1..=kappa)
        .map(|k| int_ratio((kappa + 1 - k) as u64) * line_census(c, k).q)
        .sum();
    let ctx = IntervalCtx::new(prec);
    let chernoff = chernoff_tail(n as u64, kappa, prec);
    let midskip = ctx.scale(&midskip_loss(n as u64, kappa, prec), &ratio(3, 1));
    let one = IntervalValue::exact_int(1);
    let inner = ctx.sub(&ctx.sub(&one, &chernoff), &midskip);
    let rhs = ctx.scale(&inner, &crate::chain::clique_mono_pairs_lower(kappa));
    let holds = lhs >= rhs.hi.to_rational();
    Ok(Lemma2Report {
        n,
        kappa,
        lhs,
        chernoff_term: chernoff,
        midskip_term: midskip,
        rhs,
        holds,
    })
}

/// Lower bound kept for the weight of pair type m after truncation:
/// 0 below the population threshold m ≥ ⌈n/4⌉, otherwise
/// min{C(n-κ, m-κ), C(n-κ, m)}/2^(n-κ).
pub fn truncated_weight_floor(n: u32, kappa: u32, m: u32) -> BigRational {
    assert!(kappa >= 1 && kappa * 4 <= n);
    if 4 * m < n {
        return ratio(0, 1);
    }
    let reach = |j: u32| -> BigUint {
        if j > n - kappa {
            BigUint::zero()
        } else {
            binomial((n - kappa) as u64, j as u64)
        }
    };
    let a = if m < kappa {
        BigUint::zero()
    } else {
        reach(m - kappa)
    };
    let b = reach(m);
    ratio_big(a.min(b), pow2((n - kappa) as u64))
}

/// Total floor mass under both readings of the fractional threshold n/4:
/// (sum from ⌈n/4⌉, sum from ⌊n/4⌋). The artifact's floor uses the first;
/// both are reported when they differ.
pub fn truncated_mass_sums(n: u32, kappa: u32) -> (BigRational, BigRational) {
    assert!(kappa >= 1 && kappa * 4 <= n);
    let term = |m: u32| -> BigRational {
        let reach = |j: u32| -> BigUint {
            if j > n - kappa {
                BigUint::zero()
            } else {
                binomial((n - kappa) as u64, j as u64)
            }
        };
        let a = if m < kappa {
            BigUint::zero()
        } else {
            reach(m - kappa)
        };
        let b = reach(m);
        ratio_big(a.min(b), pow2((n - kappa) as u64))
    };
    let ceil_start = n.div_ceil(4);
    let floor_start = n / 4;
    let from_ceil: BigRational = (ceil_start..=n).map(term).sum();
    let from_floor: BigRational = (floor_start..=n).map(term).sum();
    (from_ceil, from_floor)
}

/// One coordinate of a subcube embedding of [2]^m into [4]^n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubcubeCoord {
    /// Pinned to a single value.
    Fixed(u8),
    /// Free on two values (low, high); low plays the role of 1, high of 2.
    Free(u8, u8),
}

/// Pulls the coloring back along a subcube embedding, producing a [2]^m
/// coloring of the free coordinates.
pub fn subcube_project(c: &Coloring, coords: &[SubcubeCoord]) -> Coloring {
    assert_eq!(c.t(), 4);
    assert_eq!(coords.len(), c.n() as usize);
    for coord in coords {
        match *coord {
            SubcubeCoord::Fixed(v) => assert!((1..=4).contains(&v)),
            SubcubeCoord::Free(a, b) => {
                assert!((1..=4).contains(&a) && (1..=4).contains(&b) && a < b)
            }
        }
    }
    let m = coords
        .iter()
        .filter(|c| matches!(c, SubcubeCoord::Free(_, _)))
        .count() as u32;
    Coloring::from_fn(2, m, "subcube", |rank| {
        let mut bits = rank;
        let point: Vec<u8> = coords
            .iter()
            .map(|coord| match *coord {
                SubcubeCoord::Fixed(v) => v,
                SubcubeCoord::Free(a, b) => {
                    let v = if bits & 1 == 0 { a } else { b };
                    bits >>= 1;
                    v
                }
            })
            .collect();
        c.color(&GridPoint::new(point, 4))
    })
}
