//! Points, combinatorial lines, colorings, ranking, and enumeration over [t]^n.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_bigint::BigUint;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::nums::binomial;

/// A point of [t]^n; coordinate values are 1-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GridPoint {
    pub coords: Vec<u8>,
}

impl GridPoint {
    pub fn new(coords: Vec<u8>, t: u8) -> Self {
        assert!(
            coords.iter().all(|&x| 1 <= x && x <= t),
            "coordinate out of range 1..={}",
            t
        );
        GridPoint { coords }
    }
}

/// Rank of a point: Σ (x_i − 1)·t^(i−1), coordinate 1 least significant.
/// Fixes the bit order of the on-disk coloring format.
pub fn point_rank(p: &GridPoint, t: u8) -> u64 {
    let t64 = t as u64;
    let mut rank = 0u64;
    let mut weight = 1u64;
    for &x in &p.coords {
        assert!(1 <= x && x <= t, "coordinate out of range 1..={}", t);
        rank += (x as u64 - 1) * weight;
        weight *= t64;
    }
    rank
}

pub fn point_unrank(rank: u64, t: u8, n: u32) -> GridPoint {
    let t64 = t as u64;
    let mut rest = rank;
    let coords = (0..n)
        .map(|_| {
            let d = (rest % t64) as u8;
            rest /= t64;
            d + 1
        })
        .collect();
    debug_assert_eq!(rest, 0, "rank exceeds t^n");
    GridPoint { coords }
}

/// One coordinate of a line template.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Cell {
    Const(u8),
    Var,
}

/// A combinatorial line: per coordinate either a constant or the moving value.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinePattern {
    pub cells: Vec<Cell>,
}

impl LinePattern {
    pub fn new(cells: Vec<Cell>) -> Self {
        debug_assert!(
            cells.iter().any(|c| matches!(c, Cell::Var)),
            "a line needs at least one varying coordinate"
        );
        LinePattern { cells }
    }

    /// |ℓ|: the number of varying coordinates, also the Hamming distance
    /// between any two of its points.
    pub fn length(&self) -> u32 {
        self.cells.iter().filter(|c| matches!(c, Cell::Var)).count() as u32
    }

    /// ℓ(x): Var cells set to x, Const cells unchanged.
    pub fn point(&self, x: u8) -> GridPoint {
        GridPoint {
            coords: self
                .cells
                .iter()
                .map(|c| match c {
                    Cell::Const(v) => *v,
                    Cell::Var => x,
                })
                .collect(),
        }
    }
}

/// The t points ℓ(1), …, ℓ(t).
pub fn line_points(l: &LinePattern, t: u8) -> Vec<GridPoint> {
    (1..=t).map(|x| l.point(x)).collect()
}

/// An immutable 2-coloring of [t]^n keyed by point rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coloring {
    t: u8,
    n: u32,
    words: Vec<u64>,
    label: String,
}

impl Coloring {
    pub fn from_fn(t: u8, n: u32, label: &str, mut f: impl FnMut(u64) -> bool) -> Self {
        let count = point_count(t, n);
        let mut words = alloc::vec![0u64; count.div_ceil(64) as usize];
        for rank in 0..count {
            if f(rank) {
                words[(rank / 64) as usize] |= 1 << (rank % 64);
            }
        }
        Coloring {
            t,
            n,
            words,
            label: String::from(label),
        }
    }

    /// Rebuilds a coloring from raw bit words; tail bits beyond t^n are cleared.
    pub fn from_words(t: u8, n: u32, label: &str, mut words: Vec<u64>) -> Self {
        let count = point_count(t, n);
        let need = count.div_ceil(64) as usize;
        assert_eq!(words.len(), need, "word count mismatch for t^n bits");
        let tail = count % 64;
        if tail != 0 {
            words[need - 1] &= (1u64 << tail) - 1;
        }
        Coloring {
            t,
            n,
            words,
            label: String::from(label),
        }
    }

    pub fn constant(t: u8, n: u32, color: bool) -> Self {
        Coloring::from_fn(t, n, "constant", |_| color)
    }

    pub fn t(&self) -> u8 {
        self.t
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn point_count(&self) -> u64 {
        point_count(self.t, self.n)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn color_rank(&self, rank: u64) -> bool {
        debug_assert!(rank < self.point_count());
        (self.words[(rank / 64) as usize] >> (rank % 64)) & 1 == 1
    }

    pub fn color(&self, p: &GridPoint) -> bool {
        self.color_rank(point_rank(p, self.t))
    }
}

/// t^n, asserting it fits the rank type.
pub fn point_count(t: u8, n: u32) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(t as u64).expect("t^n fits u64");
    }
    acc
}

/// Colors a point by the sum of its coordinates modulo 2.
pub fn make_checkerboard(t: u8, n: u32) -> Coloring {
    Coloring::from_fn(t, n, &format!("checkerboard t={} n={}", t, n), |rank| {
        let mut sum = 0u64;
        let mut rest = rank;
        for _ in 0..n {
            sum += rest % t as u64 + 1;
            rest /= t as u64;
        }
        sum % 2 == 1
    })
}

/// Deterministic pseudo-random coloring: ChaCha8 keyed by the seed, one
/// 64-point word per block, least significant bit first.
pub fn make_random(t: u8, n: u32, seed: u64) -> Coloring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = point_count(t, n);
    let words = (0..count.div_ceil(64)).map(|_| rng.next_u64()).collect();
    Coloring::from_words(t, n, &format!("chacha8 seed={}", seed), words)
}

/// Uniform draw from 0..m without modulo bias.
pub fn rand_below(rng: &mut ChaCha8Rng, m: u64) -> u64 {
    debug_assert!(m > 0);
    let zone = u64::MAX - u64::MAX % m;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % m;
        }
    }
}

/// Two points ℓ(a), ℓ(b) on a common line.
#[derive(Clone, Debug)]
pub struct CollinearPair {
    pub line: LinePattern,
    pub a: u8,
    pub b: u8,
}

impl CollinearPair {
    pub fn new(line: LinePattern, a: u8, b: u8) -> Self {
        assert!(a < b, "pair values must satisfy a < b");
        CollinearPair { line, a, b }
    }
}

/// Type of a collinear pair: the number of coordinates where either point
/// takes value a or b, i.e. |ℓ| plus the Const cells valued a or b.
pub fn pair_type(pair: &CollinearPair) -> u32 {
    pair.line
        .cells
        .iter()
        .filter(|c| match c {
            Cell::Var => true,
            Cell::Const(v) => *v == pair.a || *v == pair.b,
        })
        .count() as u32
}

/// Number of lines: C(n,k)·t^(n−k) for one length, (t+1)^n − t^n in total.
pub fn line_count(t: u8, n: u32, k: Option<u32>) -> BigUint {
    match k {
        Some(k) => {
            assert!(1 <= k && k <= n);
            binomial(n as u64, k as u64) * BigUint::from(t as u64).pow(n - k)
        }
        None => BigUint::from(t as u64 + 1).pow(n) - BigUint::from(t as u64).pow(n),
    }
}

/// Decodes one counter of the canonical line order. Coordinate 1 is the most
/// significant base-(t+1) digit; digit v < t means Const(v+1) and digit t
/// means Var, so the stream is lexicographic over cells with Var sorted after
/// every Const. Counters whose digits are all constants decode to None.
pub fn line_from_counter(t: u8, n: u32, counter: u64) -> Option<LinePattern> {
    let base = t as u64 + 1;
    let mut cells = alloc::vec![Cell::Var; n as usize];
    let mut rest = counter;
    let mut has_var = false;
    for i in (0..n as usize).rev() {
        let d = (rest % base) as u8;
        rest /= base;
        cells[i] = if d == t {
            has_var = true;
            Cell::Var
        } else {
            Cell::Const(d + 1)
        };
    }
    debug_assert_eq!(rest, 0, "counter exceeds (t+1)^n");
    has_var.then(|| LinePattern { cells })
}

pub struct LineEnumerator {
    t: u8,
    n: u32,
    k: Option<u32>,
    counter: u64,
    end: u64,
}

impl Iterator for LineEnumerator {
    type Item = LinePattern;

    fn next(&mut self) -> Option<LinePattern> {
        while self.counter < self.end {
            let c = self.counter;
            self.counter += 1;
            if let Some(line) = line_from_counter(self.t, self.n, c) {
                if self.k.map_or(true, |k| line.length() == k) {
                    return Some(line);
                }
            }
        }
        None
    }
}

/// All lines of [t]^n in the canonical order, optionally filtered by length.
pub fn enumerate_lines(t: u8, n: u32, k: Option<u32>) -> LineEnumerator {
    if let Some(k) = k {
        assert!(1 <= k && k <= n, "length filter out of range");
    }
    LineEnumerator {
        t,
        n,
        k,
        counter: 0,
        end: point_count(t + 1, n),
    }
}

/// Streams (base_rank, step, length, const value counts) for every line whose
/// Var-coordinate bitmask lies in [mask_lo, mask_hi) ⊆ [1, 2^n). The ranks of
/// the line's points are base_rank + (x−1)·step for x = 1..t. counts[v−1] is
/// the number of Const cells with value v (meaningful for t ≤ 4). Visiting
/// order is not the canonical one; use only for order-independent reductions.
pub fn scan_line_ranks<F: FnMut(u64, u64, u32, &[u32; 4])>(
    t: u8,
    n: u32,
    mask_lo: u64,
    mask_hi: u64,
    k: Option<u32>,
    mut f: F,
) {
    debug_assert!(t >= 2 && t <= 4);
    debug_assert!(mask_lo >= 1 && mask_hi <= 1 << n);
    let t64 = t as u64;
    let mut weights = alloc::vec![0u64; n as usize];
    let mut w = 1u64;
    for weight in weights.iter_mut() {
        *weight = w;
        w *= t64;
    }
    let mut const_weights: Vec<u64> = Vec::with_capacity(n as usize);
    let mut digits: Vec<u8> = Vec::with_capacity(n as usize);
    for mask in mask_lo..mask_hi {
        let len = mask.count_ones();
        if k.map_or(false, |k| len != k) {
            continue;
        }
        let mut step = 0u64;
        const_weights.clear();
        for (i, &weight) in weights.iter().enumerate() {
            if mask >> i & 1 == 1 {
                step += weight;
            } else {
                const_weights.push(weight);
            }
        }
        digits.clear();
        digits.resize(const_weights.len(), 0);
        let mut counts = [0u32; 4];
        counts[0] = const_weights.len() as u32;
        let mut base = 0u64;
        loop {
            f(base, step, len, &counts);
            // odometer over the constant coordinates
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    break;
                }
                let d = digits[pos];
                counts[d as usize] -= 1;
                if d + 1 < t {
                    digits[pos] = d + 1;
                    counts[d as usize + 1] += 1;
                    base += const_weights[pos];
                    break;
                }
                digits[pos] = 0;
                counts[0] += 1;
                base -= (t64 - 1) * const_weights[pos];
                pos += 1;
            }
            if pos == digits.len() {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(point_rank(&GridPoint::new(vec![1, 1, 1, 1], 4), 4), 0);
        assert_eq!(point_rank(&GridPoint::new(vec![4, 4], 4), 4), 15);
        assert_eq!(point_rank(&GridPoint::new(vec![2, 1, 1], 4), 4), 1);
    }

    #[test]
    fn rank_bijective_small() {
        for (t, n) in [(2u8, 10u32), (3, 6), (4, 5)] {
            for rank in 0..point_count(t, n) {
                let p = point_unrank(rank, t, n);
                assert_eq!(point_rank(&p, t), rank);
            }
        }
    }

    proptest! {
        #[test]
        fn rank_round_trip(t in 2u8..=4, n in 1u32..=8, raw in 0u64..u64::MAX) {
            let rank = raw % point_count(t, n);
            let p = point_unrank(rank, t, n);
            prop_assert_eq!(p.coords.len(), n as usize);
            prop_assert_eq!(point_rank(&p, t), rank);
        }
    }

    #[test]
    fn line_points_examples() {
        let l = LinePattern::new(vec![
            Cell::Const(3),
            Cell::Var,
            Cell::Const(1),
            Cell::Var,
            Cell::Const(4),
        ]);
        let pts = line_points(&l, 4);
        assert_eq!(pts[0].coords, vec![3, 1, 1, 1, 4]);
        assert_eq!(pts[1].coords, vec![3, 2, 1, 2, 4]);
        assert_eq!(pts[2].coords, vec![3, 3, 1, 3, 4]);
        assert_eq!(pts[3].coords, vec![3, 4, 1, 4, 4]);

        let l = LinePattern::new(vec![Cell::Var]);
        assert_eq!(line_points(&l, 2).len(), 2);

        let l = LinePattern::new(vec![Cell::Var, Cell::Var]);
        let pts = line_points(&l, 3);
        assert_eq!(pts[2].coords, vec![3, 3]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_lines(2, 4, Some(2)).count(), 24);
        assert_eq!(enumerate_lines(4, 3, None).count(), 61);
        assert_eq!(enumerate_lines(4, 1, None).count(), 1);
    }

    /// Independent oracle: build every line by picking a var subset and the
    /// constant values with nested loops, then compare as sets.
    #[test]
    fn enumeration_matches_nested_loop_oracle() {
        for (t, n) in [(2u8, 5u32), (3, 4), (4, 3)] {
            let mut oracle = BTreeSet::new();
            for mask in 1u64..1 << n {
                let const_coords: Vec<usize> =
                    (0..n as usize).filter(|i| mask >> i & 1 == 0).collect();
                let mut assign = vec![1u8; const_coords.len()];
                loop {
                    let mut cells = vec![Cell::Var; n as usize];
                    for (j, &i) in const_coords.iter().enumerate() {
                        cells[i] = Cell::Const(assign[j]);
                    }
                    oracle.insert(format!("{:?}", cells));
                    let mut pos = 0;
                    while pos < assign.len() && assign[pos] == t {
                        assign[pos] = 1;
                        pos += 1;
                    }
                    if pos == assign.len() {
                        break;
                    }
                    assign[pos] += 1;
                }
            }
            let produced: BTreeSet<String> = enumerate_lines(t, n, None)
                .map(|l| format!("{:?}", l.cells))
                .collect();
            assert_eq!(produced.len(), oracle.len());
            assert_eq!(produced, oracle);
        }
    }

    #[test]
    fn enumeration_is_canonically_ordered() {
        // Var sorts after every Const, cells compared left to right.
        fn key(l: &LinePattern) -> Vec<u8> {
            l.cells
                .iter()
                .map(|c| match c {
                    Cell::Const(v) => *v - 1,
                    Cell::Var => u8::MAX,
                })
                .collect()
        }
        let lines: Vec<LinePattern> = enumerate_lines(4, 3, None).collect();
        for w in lines.windows(2) {
            assert!(key(&w[0]) < key(&w[1]));
        }
        assert_eq!(
            lines[0].cells,
            vec![Cell::Const(1), Cell::Const(1), Cell::Var]
        );
        assert_eq!(lines.last().unwrap().cells, vec![Cell::Var; 3]);
    }

    #[test]
    fn per_length_counts_match_formula() {
        for (t, n) in [(2u8, 9u32), (3, 6), (4, 5)] {
            for k in 1..=n {
                let count = enumerate_lines(t, n, Some(k)).count();
                assert_eq!(BigUint::from(count as u64), line_count(t, n, Some(k)));
            }
            let total = enumerate_lines(t, n, None).count();
            assert_eq!(BigUint::from(total as u64), line_count(t, n, None));
        }
    }

    #[test]
    fn emitted_lines_have_distinct_points_at_hamming_distance_len() {
        for l in enumerate_lines(4, 4, None) {
            let pts = line_points(&l, 4);
            let len = l.length();
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    let dist = pts[i]
                        .coords
                        .iter()
                        .zip(&pts[j].coords)
                        .filter(|(a, b)| a != b)
                        .count() as u32;
                    assert_eq!(dist, len);
                }
            }
        }
    }

    #[test]
    fn scan_kernel_agrees_with_enumeration() {
        for (t, n) in [(2u8, 6u32), (4, 4)] {
            let mut from_scan: BTreeSet<(u64, u64)> = BTreeSet::new();
            scan_line_ranks(t, n, 1, 1 << n, None, |base, step, len, counts| {
                assert_eq!(
                    counts.iter().sum::<u32>() + len,
                    n,
                    "counts cover the const cells"
                );
                assert!(from_scan.insert((base, step)));
            });
            let from_enum: BTreeSet<(u64, u64)> = enumerate_lines(t, n, None)
                .map(|l| {
                    let p1 = point_rank(&l.point(1), t);
                    let p2 = point_rank(&l.point(2), t);
                    (p1, p2 - p1)
                })
                .collect();
            assert_eq!(from_scan, from_enum);
        }
    }

    #[test]
    fn scan_kernel_length_filter_and_ranges_partition() {
        let n = 6u32;
        let mut full = 0u64;
        scan_line_ranks(4, n, 1, 1 << n, Some(2), |_, _, len, _| {
            assert_eq!(len, 2);
            full += 1;
        });
        assert_eq!(BigUint::from(full), line_count(4, n, Some(2)));

        let mid = 17u64;
        let mut split = 0u64;
        scan_line_ranks(4, n, 1, mid, Some(2), |_, _, _, _| split += 1);
        scan_line_ranks(4, n, mid, 1 << n, Some(2), |_, _, _, _| split += 1);
        assert_eq!(split, full);
    }

    #[test]
    fn pair_type_examples() {
        let l = LinePattern::new(vec![
            Cell::Const(3),
            Cell::Var,
            Cell::Const(1),
            Cell::Var,
            Cell::Const(4),
        ]);
        assert_eq!(pair_type(&CollinearPair::new(l, 1, 3)), 4);

        let l = LinePattern::new(vec![Cell::Var; 4]);
        assert_eq!(pair_type(&CollinearPair::new(l, 1, 2)), 4);

        let l = LinePattern::new(vec![Cell::Const(2), Cell::Var]);
        assert_eq!(pair_type(&CollinearPair::new(l, 3, 4)), 1);
    }

    #[test]
    fn pair_type_bounds() {
        for l in enumerate_lines(4, 5, None) {
            for (a, b) in [(1u8, 2u8), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
                let m = pair_type(&CollinearPair::new(l.clone(), a, b));
                assert!(l.length() <= m && m <= 5);
            }
        }
    }

    #[test]
    fn checkerboard_examples() {
        let c = make_checkerboard(4, 1);
        assert_eq!(
            (0..4).map(|r| c.color_rank(r) as u8).collect::<Vec<_>>(),
            vec![1, 0, 1, 0]
        );
        let c = make_checkerboard(2, 2);
        assert!(!c.color(&GridPoint::new(vec![1, 1], 2)));
        assert!(c.color(&GridPoint::new(vec![2, 1], 2)));
        assert!(c.color(&GridPoint::new(vec![1, 2], 2)));
        assert!(!c.color(&GridPoint::new(vec![2, 2], 2)));
    }

    #[test]
    fn checkerboard_odd_lines_split_two_two() {
        let c = make_checkerboard(4, 6);
        for k in [1u32, 3, 5] {
            let mut seen = 0;
            scan_line_ranks(4, 6, 1, 1 << 6, Some(k), |base, step, _, _| {
                let ones: u32 = (0..4).map(|x| c.color_rank(base + x * step) as u32).sum();
                assert_eq!(ones, 2);
                seen += 1;
            });
            assert!(seen > 0);
        }
    }

    #[test]
    fn random_coloring_determinism() {
        let a = make_random(4, 3, 1);
        let b = make_random(4, 3, 1);
        assert_eq!(a.words(), b.words());
        let c = make_random(4, 3, 2);
        assert_ne!(a.words(), c.words());

        let d = make_random(2, 1, 9);
        assert_eq!(d.point_count(), 2);
    }

    #[test]
    fn from_words_masks_tail_bits() {
        let c = Coloring::from_words(2, 2, "x", vec![u64::MAX]);
        assert_eq!(c.words()[0], 0b1111);
    }

    #[test]
    fn rand_below_is_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for m in [1u64, 2, 3, 7, 1 << 40] {
            for _ in 0..200 {
                assert!(rand_below(&mut rng, m) < m);
            }
        }
    }
}
