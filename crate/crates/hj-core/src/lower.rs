//! Line-free witnesses from progression-free interval colorings.
//!
//! A combinatorial line's point sums form an arithmetic progression with the
//! line length as step, so any coloring of the sum range without a
//! monochromatic t-term progression lifts along coordinate sums to a
//! line-free coloring of [t]^n. The search half finds such interval
//! colorings by backtracking; the verify half streams every line of the
//! lifted grid.

use alloc::format;
use alloc::vec::Vec;
use num_bigint::BigUint;

use crate::grid::{line_count, scan_line_ranks, Coloring};
use crate::InputError;

/// A 2-coloring of the integer interval 1..=len, bit-packed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalColoring {
    len: u32,
    bits: Vec<u64>,
}

impl IntervalColoring {
    pub fn new(len: u32, bits: Vec<u64>) -> Self {
        assert!(len >= 1);
        assert_eq!(bits.len(), len.div_ceil(64) as usize);
        IntervalColoring { len, bits }
    }

    pub fn from_fn(len: u32, mut f: impl FnMut(u32) -> bool) -> Self {
        let mut bits = alloc::vec![0u64; len.div_ceil(64) as usize];
        for x in 1..=len {
            if f(x) {
                bits[(x - 1) as usize / 64] |= 1 << ((x - 1) % 64);
            }
        }
        IntervalColoring { len, bits }
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn color(&self, x: u32) -> bool {
        assert!(1 <= x && x <= self.len);
        self.bits[(x - 1) as usize / 64] >> ((x - 1) % 64) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }
}

/// Progression length for the mono-free search; three terms is the shortest
/// progression with any content.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct APConstraint {
    t: u32,
}

impl APConstraint {
    pub fn new(t: u32) -> Result<Self, InputError> {
        if t < 3 {
            return Err(InputError("progression length must be at least 3"));
        }
        Ok(APConstraint { t })
    }

    pub fn t(&self) -> u32 {
        self.t
    }
}

/// First monochromatic t-term progression (start, step), scanning starts
/// then steps.
pub fn has_mono_ap(c: &IntervalColoring, ap: &APConstraint) -> Option<(u32, u32)> {
    let t = ap.t();
    for start in 1..=c.len() {
        let mut step = 1;
        while start + (t - 1) * step <= c.len() {
            let first = c.color(start);
            if (1..t).all(|i| c.color(start + i * step) == first) {
                return Some((start, step));
            }
            step += 1;
        }
    }
    None
}

/// Depth-first search for a coloring of 1..=len with no monochromatic
/// t-term progression. Positions are assigned in order with color 0 tried
/// first, so a hit is deterministic; only progressions ending at the newest
/// position need checking.
pub fn search_ap_free(len: u32, ap: &APConstraint) -> Option<IntervalColoring> {
    let t = ap.t();
    let mut colors = alloc::vec![0u8; len as usize + 1];

    fn closes_mono(colors: &[u8], x: u32, t: u32, color: u8) -> bool {
        let reach = (t - 1) as u64;
        let mut step = 1u32;
        while reach * (step as u64) < x as u64 {
            if (1..t).all(|i| colors[(x - i * step) as usize] == color) {
                return true;
            }
            step += 1;
        }
        false
    }

    fn extend(colors: &mut [u8], x: u32, len: u32, t: u32) -> bool {
        if x > len {
            return true;
        }
        for color in [1u8, 2] {
            if !closes_mono(colors, x, t, color) {
                colors[x as usize] = color;
                if extend(colors, x + 1, len, t) {
                    return true;
                }
            }
        }
        colors[x as usize] = 0;
        false
    }

    if !extend(&mut colors, 1, len, t) {
        return None;
    }
    Some(IntervalColoring::from_fn(len, |x| colors[x as usize] == 2))
}

/// Colors each grid point by its shifted coordinate sum: point x maps to
/// base color at Σx_i - n + 1, so the base must cover 1..=(t-1)n+1.
pub fn lift_to_grid(base: &IntervalColoring, t: u8, n: u32) -> Result<Coloring, InputError> {
    assert!(t >= 2 && n >= 1);
    let range = (t as u32 - 1) * n + 1;
    if base.len() < range {
        return Err(InputError("base coloring shorter than the sum range"));
    }
    let t64 = t as u64;
    let label = format!("sum lift of {} values", base.len());
    Ok(Coloring::from_fn(t, n, &label, |rank| {
        let mut rank = rank;
        let mut shifted = 1u32;
        for _ in 0..n {
            shifted += (rank % t64) as u32;
            rank /= t64;
        }
        base.color(shifted)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFreeReport {
    pub t: u8,
    pub n: u32,
    pub lines_checked: u64,
    pub mono_lines: u64,
}

impl LineFreeReport {
    pub fn line_free(&self) -> bool {
        self.mono_lines == 0
    }

    /// Combines disjoint mask-range scans of the same coloring.
    pub fn merge(&self, other: &LineFreeReport) -> LineFreeReport {
        assert!(self.t == other.t && self.n == other.n);
        LineFreeReport {
            t: self.t,
            n: self.n,
            lines_checked: self.lines_checked + other.lines_checked,
            mono_lines: self.mono_lines + other.mono_lines,
        }
    }
}

/// Streams the lines whose varying-coordinate mask lies in
/// [mask_lo, mask_hi) and counts the monochromatic ones.
pub fn verify_line_free_masked(c: &Coloring, mask_lo: u64, mask_hi: u64) -> LineFreeReport {
    let t = c.t();
    let mut lines_checked = 0u64;
    let mut mono_lines = 0u64;
    scan_line_ranks(
        t,
        c.n(),
        mask_lo,
        mask_hi,
        None,
        |base, step, _len, _counts| {
            lines_checked += 1;
            let first = c.color_rank(base);
            if (1..t as u64).all(|i| c.color_rank(base + i * step) == first) {
                mono_lines += 1;
            }
        },
    );
    LineFreeReport {
        t,
        n: c.n(),
        lines_checked,
        mono_lines,
    }
}

/// Full scan over every line of the grid.
pub fn verify_line_free(c: &Coloring) -> LineFreeReport {
    let report = verify_line_free_masked(c, 1, 1 << c.n());
    debug_assert_eq!(
        BigUint::from(report.lines_checked),
        line_count(c.t(), c.n(), None)
    );
    report
}

/// Line-free 2-coloring of [3]^3, lifted from the shortest progression-free
/// interval coloring that covers its sum range.
pub fn hj32_witness() -> Coloring {
    let ap = APConstraint::new(3).unwrap();
    let base = search_ap_free(7, &ap).expect("a 3-progression-free coloring of 7 points exists");
    lift_to_grid(&base, 3, 3).unwrap()
}
