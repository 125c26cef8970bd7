//! Chain decomposition of the hypercube [2]^n and the weighted mono-pair
//! inequality it certifies.
//!
//! A permutation σ of the coordinates induces a chain of n+1 points, from
//! all-1s to all-2s, flipping coordinate σ(i) at step i. Pairs along a chain
//! are exactly the collinear pairs of the cube, and averaging the weighted
//! pair statistic q(k, σ) over all σ recovers the global line density q(k).

use alloc::vec::Vec;
use itertools::Itertools;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::grid::{Coloring, GridPoint};
use crate::interval::{IntervalCtx, IntervalValue};
use crate::nums::{binomial, central_binomial, int_ratio, pow2, ratio, ratio_big};

/// A coordinate order for one chain: sigma[i] is the 1-based coordinate
/// flipped from 1 to 2 at step i+1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSpec {
    sigma: Vec<u8>,
}

impl ChainSpec {
    pub fn new(sigma: Vec<u8>) -> Self {
        let n = sigma.len();
        let mut seen = alloc::vec![false; n];
        for &s in &sigma {
            assert!(s >= 1 && s as usize <= n, "coordinate out of range");
            assert!(!seen[s as usize - 1], "repeated coordinate");
            seen[s as usize - 1] = true;
        }
        ChainSpec { sigma }
    }

    pub fn identity(n: u32) -> Self {
        ChainSpec {
            sigma: (1..=n as u8).collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.sigma.len() as u32
    }

    pub fn sigma(&self) -> &[u8] {
        &self.sigma
    }
}

/// All n! chain orders. Intended for small n only.
pub fn all_permutations(n: u32) -> Vec<ChainSpec> {
    (1..=n as u8)
        .permutations(n as usize)
        .map(ChainSpec::new)
        .collect()
}

/// The chain C_0..C_n in [2]^n: C_i has 2 exactly in coordinates σ(1..i).
pub fn chain_points(spec: &ChainSpec) -> Vec<GridPoint> {
    let n = spec.n() as usize;
    let mut coords = alloc::vec![1u8; n];
    let mut out = Vec::with_capacity(n + 1);
    out.push(GridPoint::new(coords.clone(), 2));
    for &s in &spec.sigma {
        coords[s as usize - 1] = 2;
        out.push(GridPoint::new(coords.clone(), 2));
    }
    out
}

/// Ranks of the chain points, built incrementally: flipping coordinate s
/// adds 2^(s-1).
pub fn chain_ranks(spec: &ChainSpec) -> Vec<u64> {
    let mut out = Vec::with_capacity(spec.sigma.len() + 1);
    let mut rank = 0u64;
    out.push(rank);
    for &s in &spec.sigma {
        rank += 1u64 << (s - 1);
        out.push(rank);
    }
    out
}

/// w_{i,j} = C(n-(j-i), i) / 2^(n-(j-i)): the fraction of chains through a
/// fixed comparable pair at levels i ≤ j, times the number of such pairs
/// sharing the lower point... stored once per (row, distance).
#[derive(Clone, Debug)]
pub struct WeightTable {
    n: u32,
    w: Vec<Vec<BigRational>>,
}

impl WeightTable {
    pub fn new(n: u32) -> Self {
        let w = (0..=n)
            .map(|i| {
                (0..=n - i)
                    .map(|d| chain_weight(n, i, i + d))
                    .collect::<Vec<_>>()
            })
            .collect();
        WeightTable { n, w }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// w_{i,j} for 0 ≤ i ≤ j ≤ n.
    pub fn weight(&self, i: u32, j: u32) -> &BigRational {
        assert!(i <= j && j <= self.n);
        &self.w[i as usize][(j - i) as usize]
    }
}

/// C(n-(j-i), i) / 2^(n-(j-i)) for 0 ≤ i ≤ j ≤ n.
pub fn chain_weight(n: u32, i: u32, j: u32) -> BigRational {
    assert!(i <= j && j <= n);
    let d = (j - i) as u64;
    ratio_big(binomial(n as u64 - d, i as u64), pow2(n as u64 - d))
}

/// The weighted same-color indicator sum along one chain:
/// q(k, σ) = Σ_i C(n-k, i)/2^(n-k) · [C_i and C_(i+k) share a color].
pub fn q_k_sigma(c: &Coloring, spec: &ChainSpec, k: u32) -> BigRational {
    assert_eq!(c.t(), 2, "chains live in the hypercube");
    let n = spec.n();
    assert_eq!(c.n(), n);
    assert!(k >= 1 && k <= n);
    let ranks = chain_ranks(spec);
    let colors: Vec<bool> = ranks.iter().map(|&r| c.color_rank(r)).collect();
    let m = (n - k) as u64;
    // one running binomial C(m, i) keeps this loop integer-only
    let mut coeff = BigUint::one();
    let mut num = BigUint::zero();
    for i in 0..=m {
        if colors[i as usize] == colors[(i + k as u64) as usize] {
            num += &coeff;
        }
        if i < m {
            coeff = coeff * (m - i) / (i + 1);
        }
    }
    ratio_big(num, pow2(m))
}

/// Direct census of q(k) over [2]^n: the fraction of length-k lines whose
/// two points share a color.
pub fn hypercube_q(c: &Coloring, k: u32) -> BigRational {
    assert_eq!(c.t(), 2);
    let n = c.n();
    assert!(k >= 1 && k <= n);
    let mut mono = 0u64;
    let mut total = 0u64;
    crate::grid::scan_line_ranks(2, n, 1, 1u64 << n, Some(k), |base, step, _, _| {
        total += 1;
        if c.color_rank(base) == c.color_rank(base + step) {
            mono += 1;
        }
    });
    ratio_big(BigUint::from(mono), BigUint::from(total))
}

/// The least chain weight in the window {(i,j) : h ≤ i ≤ j ≤ h+κ}; by
/// unimodality of the binomial row this is attained at a diagonal corner,
/// so it equals min{C(n,h), C(n,h+κ)}/2^n.
pub fn w_star(n: u32, kappa: u32, h: u32) -> BigRational {
    assert!(kappa <= n && h <= n - kappa);
    let a = binomial(n as u64, h as u64);
    let b = binomial(n as u64, (h + kappa) as u64);
    ratio_big(a.min(b), pow2(n as u64))
}

/// Σ_h w_star(n, κ, h) over all window positions h = 0..n-κ.
pub fn sum_w_star(n: u32, kappa: u32) -> BigRational {
    (0..=n - kappa).map(|h| w_star(n, kappa, h)).sum()
}

/// Any 2-coloring of κ+1 mutually collinear points has at least this many
/// monochromatic pairs: (κ²-1)/4.
pub fn clique_mono_pairs_lower(kappa: u32) -> BigRational {
    assert!(kappa >= 1);
    ratio(kappa as i64 * kappa as i64 - 1, 4)
}

#[derive(Clone, Debug)]
pub struct Lemma1Report {
    pub n: u32,
    pub kappa: u32,
    pub lhs: BigRational,
    pub rhs: IntervalValue,
    pub holds: bool,
}

/// Certified enclosure of (κ²-1)/4 · (1 - κ·sqrt(2/(πn))).
pub fn lemma1_rhs(n: u64, kappa: u32, prec: u32) -> IntervalValue {
    let ctx = IntervalCtx::new(prec);
    let two = ctx.from_rational(&ratio(2, 1));
    let pi_n = ctx.scale(&ctx.pi(), &int_ratio(n));
    let root = ctx.sqrt(&ctx.div(&two, &pi_n));
    let one = IntervalValue::exact_int(1);
    let paren = ctx.sub(&one, &ctx.scale(&root, &int_ratio(kappa as u64)));
    ctx.scale(&paren, &clique_mono_pairs_lower(kappa))
}

/// The weighted mono-pair inequality on [2]^n:
/// Σ_{k=1..κ} (κ+1-k)·q(k) ≥ (κ²-1)/4 · (1 - κ·sqrt(2/(πn))).
///
/// `holds` is a one-sided certificate: the exact lhs must dominate the upper
/// endpoint of the rhs enclosure.
pub fn lemma1_check(c: &Coloring, kappa: u32, prec: u32) -> Lemma1Report {
    let n = c.n();
    assert!(kappa >= 1 && kappa <= n);
    let lhs: BigRational = (1..=kappa)
        .map(|k| int_ratio((kappa + 1 - k) as u64) * hypercube_q(c, k))
        .sum();
    let rhs = lemma1_rhs(n as u64, kappa, prec);
    let holds = lhs >= rhs.hi.to_rational();
    Lemma1Report {
        n,
        kappa,
        lhs,
        rhs,
        holds,
    }
}

/// Exact form of the central-binomial mass C(n, ⌊n/2⌋)/2^n that the
/// telescoped weight sum loses.
pub fn central_mass(n: u32) -> BigRational {
    ratio_big(central_binomial(n as u64), pow2(n as u64))
}
