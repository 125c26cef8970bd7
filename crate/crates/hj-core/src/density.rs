//! Exact line-census statistics over [4]^n: p2, p3, p4, q per length, typed
//! pair densities, and their recombination identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{rand_below, scan_line_ranks, Coloring};
use crate::nums::{binomial, pow2, ratio, ratio_big};

/// Exact census of the lines of one length: fractions of 2–2, 3–1, and 4–0
/// color splits, and the monochromatic pair density q.
#[derive(Clone, Debug)]
pub struct DensityProfile {
    pub k: u32,
    /// Lines classified; for a sampled census, the number of samples drawn.
    pub line_count: u64,
    pub p2: BigRational,
    pub p3: BigRational,
    pub p4: BigRational,
    pub q: BigRational,
}

fn profile_from_counts(k: u32, c2: u64, c3: u64, c4: u64) -> DensityProfile {
    let total = c2 + c3 + c4;
    assert!(total > 0);
    let den = BigInt::from(total);
    let p2 = BigRational::new(BigInt::from(c2), den.clone());
    let p3 = BigRational::new(BigInt::from(c3), den.clone());
    let p4 = BigRational::new(BigInt::from(c4), den.clone());
    // 2, 3, and 6 monochromatic pairs out of 6 per split class
    let q = BigRational::new(
        BigInt::from(2 * c2 + 3 * c3 + 6 * c4),
        BigInt::from(6 * total),
    );
    debug_assert!(&p2 + &p3 + &p4 == BigRational::one());
    debug_assert!(q == ratio(1, 3) * &p2 + ratio(1, 2) * &p3 + &p4);
    DensityProfile {
        k,
        line_count: total,
        p2,
        p3,
        p4,
        q,
    }
}

#[inline]
fn split_class(c: &Coloring, base: u64, step: u64) -> u32 {
    let ones = c.color_rank(base) as u32
        + c.color_rank(base + step) as u32
        + c.color_rank(base + 2 * step) as u32
        + c.color_rank(base + 3 * step) as u32;
    ones.min(4 - ones) // 0 = monochromatic, 1 = 3–1, 2 = 2–2
}

/// Exhaustive census of all C(n,k)·4^(n−k) lines of length k.
pub fn line_census(c: &Coloring, k: u32) -> DensityProfile {
    assert_eq!(c.t(), 4, "densities are defined over [4]^n");
    let n = c.n();
    assert!(1 <= k && k <= n, "length out of range");
    let expected = line_count_u64(n, k);
    assert!(expected <= 1_000_000_000, "census capped at 1e9 lines");
    let mut counts = [0u64; 3];
    scan_line_ranks(4, n, 1, 1 << n, Some(k), |base, step, _, _| {
        counts[split_class(c, base, step) as usize] += 1;
    });
    let profile = profile_from_counts(k, counts[2], counts[1], counts[0]);
    debug_assert_eq!(profile.line_count, expected);
    profile
}

fn line_count_u64(n: u32, k: u32) -> u64 {
    let c = binomial(n as u64, k as u64) * pow2(2 * (n - k) as u64);
    u64::try_from(&c).expect("line count fits u64")
}

/// Seeded Monte Carlo census over uniformly drawn lines of length k; the
/// returned line_count is the sample size.
pub fn sampled_census(c: &Coloring, k: u32, samples: u64, seed: u64) -> DensityProfile {
    assert_eq!(c.t(), 4);
    let n = c.n();
    assert!(1 <= k && k <= n && samples > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = alloc::vec![0u64; n as usize];
    let mut w = 1u64;
    for weight in weights.iter_mut() {
        *weight = w;
        w *= 4;
    }
    let mut idx: alloc::vec::Vec<u32> = (0..n).collect();
    let mut counts = [0u64; 3];
    for _ in 0..samples {
        // uniform k-subset of coordinates by partial Fisher-Yates
        for i in 0..k as usize {
            let j = i as u64 + rand_below(&mut rng, (n as usize - i) as u64);
            idx.swap(i, j as usize);
        }
        let mut step = 0u64;
        for &i in &idx[..k as usize] {
            step += weights[i as usize];
        }
        let mut base = 0u64;
        for &i in &idx[k as usize..] {
            base += rand_below(&mut rng, 4) * weights[i as usize];
        }
        counts[split_class(c, base, step) as usize] += 1;
    }
    profile_from_counts(k, counts[2], counts[1], counts[0])
}

/// q = (1/3)p2 + (1/2)p3 + p4, the fraction of monochromatic pairs among the
/// 6 point pairs per line.
pub fn q_value(profile: &DensityProfile) -> BigRational {
    ratio(1, 3) * &profile.p2 + ratio(1, 2) * &profile.p3 + &profile.p4
}

/// Recovers p4 from q and p3: (3/2)(q − p3/6 − 1/3).
pub fn p4_from_identity(q: &BigRational, p3: &BigRational) -> BigRational {
    ratio(3, 2) * (q - p3 / BigRational::from_integer(6.into()) - ratio(1, 3))
}

/// Monochromatic fraction among collinear pairs of one type.
#[derive(Clone, Debug)]
pub struct TypedDensity {
    pub k: u32,
    pub m: u32,
    /// None when the (k, m) class contains no pairs at all.
    pub q_km: Option<BigRational>,
    pub pair_count: u64,
}

/// Fraction of lines of length k whose pair of given colors has type m:
/// C(n−k, m−k) / 2^(n−k).
pub fn type_weight(n: u32, k: u32, m: u32) -> BigRational {
    assert!(k <= m && m <= n);
    ratio_big(
        binomial((n - k) as u64, (m - k) as u64),
        pow2((n - k) as u64),
    )
}

/// Exact census of monochromatic pairs among the pairs of type m living on
/// lines of length k.
pub fn typed_census(c: &Coloring, k: u32, m: u32) -> TypedDensity {
    assert_eq!(c.t(), 4);
    let n = c.n();
    assert!(1 <= k && k <= m && m <= n, "need k ≤ m ≤ n");
    let mut pair_count = 0u64;
    let mut mono = 0u64;
    scan_line_ranks(4, n, 1, 1 << n, Some(k), |base, step, _, counts| {
        for (a, b) in [(0u32, 1u32), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            if k + counts[a as usize] + counts[b as usize] == m {
                pair_count += 1;
                let ca = c.color_rank(base + a as u64 * step);
                let cb = c.color_rank(base + b as u64 * step);
                mono += (ca == cb) as u64;
            }
        }
    });
    let q_km =
        (pair_count > 0).then(|| BigRational::new(BigInt::from(mono), BigInt::from(pair_count)));
    TypedDensity {
        k,
        m,
        q_km,
        pair_count,
    }
}
