//! k-embeddings of [4]^4 into [4]^n and the line-multiplicity accounting
//! behind the odd-line density bound.
//!
//! An embedding maps each target coordinate to a constant or to one of the
//! four source coordinates, using every source exactly k times. Composing an
//! embedding with the 15-line parity gadget produces lines of lengths k..4k
//! in the big grid; counting how often a given line arises is a closed-form
//! product of binomials.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::grid::{Cell, Coloring, GridPoint, LinePattern};
use crate::nums::{binomial, int_ratio, multinomial, ratio};
use crate::InputError;

/// One coordinate of an embedding map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbedCell {
    /// Pinned to a value of 1..4.
    Const(u8),
    /// Copies source coordinate 1..4.
    Source(u8),
}

/// A k-embedding of [4]^4 into [4]^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingSpec {
    cells: Vec<EmbedCell>,
    k: u32,
}

impl EmbeddingSpec {
    pub fn new(cells: Vec<EmbedCell>, k: u32) -> Self {
        assert!(k >= 1);
        let mut counts = [0u32; 4];
        for cell in &cells {
            match *cell {
                EmbedCell::Const(v) => assert!((1..=4).contains(&v)),
                EmbedCell::Source(j) => {
                    assert!((1..=4).contains(&j));
                    counts[j as usize - 1] += 1;
                }
            }
        }
        assert!(
            counts.iter().all(|&c| c == k),
            "each source used exactly k times"
        );
        EmbeddingSpec { cells, k }
    }

    pub fn n(&self) -> u32 {
        self.cells.len() as u32
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn cells(&self) -> &[EmbedCell] {
        &self.cells
    }

    /// Image of a source point: constants stay, sources copy coordinates.
    pub fn apply(&self, p: &GridPoint) -> GridPoint {
        assert_eq!(p.coords.len(), 4);
        let coords = self
            .cells
            .iter()
            .map(|cell| match *cell {
                EmbedCell::Const(v) => v,
                EmbedCell::Source(j) => p.coords[j as usize - 1],
            })
            .collect();
        GridPoint::new(coords, 4)
    }

    /// Image of a source line: Var sources pick up the line's Var cells.
    pub fn compose(&self, g: &LinePattern) -> LinePattern {
        assert_eq!(g.cells.len(), 4);
        let cells = self
            .cells
            .iter()
            .map(|cell| match *cell {
                EmbedCell::Const(v) => Cell::Const(v),
                EmbedCell::Source(j) => g.cells[j as usize - 1],
            })
            .collect();
        LinePattern::new(cells)
    }
}

/// n!/(k!^4 (n-4k)!) · 4^(n-4k): the number of k-embeddings into [4]^n.
pub fn embedding_count(n: u32, k: u32) -> BigUint {
    assert!(k >= 1 && 4 * k <= n);
    let parts = [k as u64, k as u64, k as u64, k as u64, (n - 4 * k) as u64];
    multinomial(&parts) * BigUint::from(4u8).pow(n - 4 * k)
}

/// Every k-embedding into [4]^n, in a deterministic order. Exponential in n;
/// intended for oracle duty at small n.
pub fn enumerate_embeddings(n: u32, k: u32) -> Vec<EmbeddingSpec> {
    assert!(k >= 1 && 4 * k <= n);
    let mut out = Vec::new();
    let mut cells: Vec<EmbedCell> = Vec::with_capacity(n as usize);
    fn recurse(
        n: u32,
        k: u32,
        counts: &mut [u32; 4],
        cells: &mut Vec<EmbedCell>,
        out: &mut Vec<EmbeddingSpec>,
    ) {
        let pos = cells.len() as u32;
        if pos == n {
            out.push(EmbeddingSpec::new(cells.clone(), k));
            return;
        }
        let deficit: u32 = counts.iter().map(|&c| k - c).sum();
        if deficit > n - pos {
            return;
        }
        for j in 1..=4u8 {
            if counts[j as usize - 1] < k {
                counts[j as usize - 1] += 1;
                cells.push(EmbedCell::Source(j));
                recurse(n, k, counts, cells, out);
                cells.pop();
                counts[j as usize - 1] -= 1;
            }
        }
        if deficit < n - pos {
            for v in 1..=4u8 {
                cells.push(EmbedCell::Const(v));
                recurse(n, k, counts, cells, out);
                cells.pop();
            }
        }
    }
    recurse(n, k, &mut [0u32; 4], &mut cells, &mut out);
    out
}

/// Counts of Const cells by value.
pub fn line_const_profile(l: &LinePattern) -> [u64; 4] {
    let mut profile = [0u64; 4];
    for cell in &l.cells {
        if let Cell::Const(v) = cell {
            profile[*v as usize - 1] += 1;
        }
    }
    profile
}

/// The number of pairs (embedding, gadget line) composing to the given line,
/// from its const profile. The line length must be jk for some j in 1..4;
/// the Var block splits among the j active sources, and each inactive source
/// claims k const cells carrying its own value.
pub fn line_multiplicity(l: &LinePattern, k: u32) -> Result<BigUint, InputError> {
    assert!(k >= 1);
    let len = l.length();
    if len % k != 0 || len / k == 0 || len / k > 4 {
        return Err(InputError("line length must be k, 2k, 3k, or 4k"));
    }
    let j = len / k;
    let p = line_const_profile(l);
    let k64 = k as u64;
    let choose = |c: u64| binomial(c, k64);
    let total = match j {
        1 => {
            let mut sum = BigUint::zero();
            for i0 in 0..4 {
                let mut prod = BigUint::one();
                for (c, &cnt) in p.iter().enumerate() {
                    if c != i0 {
                        prod *= choose(cnt);
                    }
                }
                sum += prod;
            }
            sum
        }
        2 => {
            let mut sum = BigUint::zero();
            for a in 0..4 {
                for b in a + 1..4 {
                    sum += choose(p[a]) * choose(p[b]);
                }
            }
            multinomial(&[k64, k64]) * sum
        }
        3 => {
            let sum: BigUint = p.iter().map(|&cnt| choose(cnt)).sum();
            multinomial(&[k64, k64, k64]) * sum
        }
        _ => multinomial(&[k64, k64, k64, k64]),
    };
    Ok(total)
}

/// Brute-force recount: enumerate every embedding and every gadget line and
/// count exact composition matches.
pub fn line_multiplicity_oracle(l: &LinePattern, k: u32) -> BigUint {
    let n = l.cells.len() as u32;
    let gadget = crate::gadget::build_gadget();
    let mut count: u64 = 0;
    for spec in enumerate_embeddings(n, k) {
        for g in &gadget.lines {
            if spec.compose(g) == *l {
                count += 1;
            }
        }
    }
    BigUint::from(count)
}

/// The four balanced-profile multiplicity values for lengths k, 2k, 3k, 4k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityBounds {
    pub n: u32,
    pub k: u32,
    pub m1: BigUint,
    pub m2: BigUint,
    pub m3: BigUint,
    pub m4: BigUint,
}

/// Multiplicities at profiles as balanced as the floor allows:
/// M1 = 4·C(⌊(n-k)/4⌋, k)^3, M2 = 6·C(2k,k)·C(⌊(n-2k)/4⌋, k)^2,
/// M3 = 4·(3k)!/k!^3·C(⌊(n-3k)/4⌋, k), M4 = (4k)!/k!^4.
pub fn min_multiplicity(n: u32, k: u32) -> MultiplicityBounds {
    assert!(k >= 1 && 4 * k <= n);
    let k64 = k as u64;
    let quarter = |len: u32| ((n - len) / 4) as u64;
    let m1 = BigUint::from(4u8) * binomial(quarter(k), k64).pow(3);
    let m2 = BigUint::from(6u8) * multinomial(&[k64, k64]) * binomial(quarter(2 * k), k64).pow(2);
    let m3 = BigUint::from(4u8) * multinomial(&[k64, k64, k64]) * binomial(quarter(3 * k), k64);
    let m4 = multinomial(&[k64, k64, k64, k64]);
    MultiplicityBounds {
        n,
        k,
        m1,
        m2,
        m3,
        m4,
    }
}

/// The gadget's length spectrum: of its 15 lines, (4, 6, 4, 1) have lengths
/// (1, 2, 3, 4), giving weights (4/15, 6/15, 4/15, 1/15).
pub fn gadget_length_mix() -> [BigRational; 4] {
    [ratio(4, 15), ratio(6, 15), ratio(4, 15), ratio(1, 15)]
}

#[derive(Clone, Debug)]
pub struct Lemma4Report {
    pub n: u64,
    pub k: u32,
    pub lhs: BigRational,
    pub holds: bool,
    /// Set when 16k² ≥ n: the pulled-out factor is nonpositive, so the
    /// inequality is vacuous.
    pub degenerate: bool,
}

/// The odd-line density bound: with p3 sampled at lengths k, 2k, 3k, 4k,
/// (1 - 16k²/n) · Σ mix_j·p3(jk) ≤ 14/15.
pub fn lemma4_check(p3: &[BigRational; 4], n: u64, k: u32) -> Result<Lemma4Report, InputError> {
    if k == 0 || 4 * k as u64 > n {
        return Err(InputError("k must satisfy 1 <= k <= n/4"));
    }
    for v in p3 {
        if v < &BigRational::zero() || v > &BigRational::one() {
            return Err(InputError("densities must lie in [0, 1]"));
        }
    }
    let factor = BigRational::one() - ratio(16, 1) * int_ratio(k as u64 * k as u64) / int_ratio(n);
    let mix = gadget_length_mix();
    let p3_plus: BigRational = mix.iter().zip(p3).map(|(w, v)| w * v).sum();
    let lhs = &factor * p3_plus;
    let degenerate = factor <= BigRational::zero();
    let holds = lhs <= ratio(14, 15);
    Ok(Lemma4Report {
        n,
        k,
        lhs,
        holds,
        degenerate,
    })
}

#[derive(Clone, Debug)]
pub struct OddCountReport {
    /// Odd composed lines counted over (embedding, gadget line) pairs.
    pub direct: BigUint,
    /// The same count re-derived as Σ_line multiplicity·[line odd].
    pub weighted: BigUint,
    pub embeddings: BigUint,
    /// Largest odd-line count of any single embedding.
    pub per_embedding_max: u32,
    /// direct ≤ 14·embeddings.
    pub bound_ok: bool,
}

/// Double-counts odd composed lines: once over embeddings, once over lines
/// weighted by multiplicity. Exponential enumeration; n ≤ 5 territory.
pub fn weighted_odd_count_identity(c: &Coloring, k: u32) -> OddCountReport {
    assert_eq!(c.t(), 4);
    let n = c.n();
    let gadget = crate::gadget::build_gadget();
    let line_is_odd = |l: &LinePattern| -> bool {
        crate::grid::line_points(l, 4)
            .iter()
            .fold(false, |acc, p| acc ^ c.color(p))
    };

    let mut direct = 0u64;
    let mut per_embedding_max = 0u32;
    let specs = enumerate_embeddings(n, k);
    for spec in &specs {
        let odd_here = gadget
            .lines
            .iter()
            .filter(|g| line_is_odd(&spec.compose(g)))
            .count() as u32;
        per_embedding_max = per_embedding_max.max(odd_here);
        direct += odd_here as u64;
    }

    let mut weighted = BigUint::zero();
    for j in 1..=4u32 {
        let len = j * k;
        if len > n {
            continue;
        }
        for l in crate::grid::enumerate_lines(4, n, Some(len)) {
            if line_is_odd(&l) {
                weighted += line_multiplicity(&l, k).unwrap();
            }
        }
    }

    let embeddings = BigUint::from(specs.len() as u64);
    let bound_ok = BigUint::from(direct) <= BigUint::from(14u8) * &embeddings;
    OddCountReport {
        direct: BigUint::from(direct),
        weighted,
        embeddings,
        per_embedding_max,
        bound_ok,
    }
}
