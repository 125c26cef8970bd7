//! The 15-line parity gadget in [4]^4.
//!
//! For each nonempty S ⊆ {1,2,3,4} take the line with Var cells on S and
//! Const value i at every coordinate i ∉ S. Every point of [4]^4 lies on an
//! even number of these lines, so no 2-coloring can make all 15 lines carry
//! an odd number of points of each color: at most 14 can be odd, and an
//! exhaustive sweep over the 29 covered points confirms 14 is attained.

use alloc::vec::Vec;

use crate::grid::{line_points, point_rank, Cell, LinePattern};

pub const GADGET_LINE_COUNT: usize = 15;
pub const GADGET_SUPPORT_SIZE: usize = 29;

/// The 15 gadget lines, ordered by subset size then lexicographically:
/// ℓ^1..ℓ^4 vary one coordinate, ℓ^5..ℓ^10 two, ℓ^11..ℓ^14 three, ℓ^15 all.
#[derive(Clone, Debug)]
pub struct GadgetLineSet {
    pub lines: Vec<LinePattern>,
}

/// The distinct points covered by the gadget, as sorted [4]^4 ranks, with
/// the indices of the lines through each.
#[derive(Clone, Debug)]
pub struct GadgetSupport {
    pub points: Vec<u64>,
    pub incidence: Vec<Vec<u8>>,
}

fn subsets_by_size_then_lex() -> Vec<u8> {
    let mut subsets: Vec<u8> = (1u8..16).collect();
    // ascending lex within a size class means ascending as a bitmask here,
    // because coordinate 1 is bit 0 and lower coordinates sort first
    subsets.sort_by_key(|s| (s.count_ones(), lex_key(*s)));
    subsets
}

fn lex_key(s: u8) -> u32 {
    // pack member coordinates into nibbles, most significant first
    let mut key = 0u32;
    let mut slot = 0;
    for coord in 1..=4u8 {
        if s & (1 << (coord - 1)) != 0 {
            key |= (coord as u32) << (4 * (7 - slot));
            slot += 1;
        }
    }
    key
}

pub fn build_gadget() -> GadgetLineSet {
    let lines = subsets_by_size_then_lex()
        .into_iter()
        .map(|s| {
            let cells = (1..=4u8)
                .map(|coord| {
                    if s & (1 << (coord - 1)) != 0 {
                        Cell::Var
                    } else {
                        Cell::Const(coord)
                    }
                })
                .collect();
            LinePattern::new(cells)
        })
        .collect();
    GadgetLineSet { lines }
}

#[derive(Clone, Debug)]
pub struct IncidenceReport {
    pub all_even: bool,
    /// Lines through each of the 256 points of [4]^4, indexed by rank.
    pub counts: Vec<u32>,
}

/// Counts gadget lines through every point of [4]^4.
pub fn incidence_check() -> IncidenceReport {
    let gadget = build_gadget();
    let mut counts = alloc::vec![0u32; 256];
    for line in &gadget.lines {
        for p in line_points(line, 4) {
            counts[point_rank(&p, 4) as usize] += 1;
        }
    }
    let all_even = counts.iter().all(|c| c % 2 == 0);
    IncidenceReport { all_even, counts }
}

pub fn gadget_support() -> GadgetSupport {
    let gadget = build_gadget();
    let mut points: Vec<u64> = gadget
        .lines
        .iter()
        .flat_map(|l| line_points(l, 4).into_iter().map(|p| point_rank(&p, 4)))
        .collect();
    points.sort_unstable();
    points.dedup();
    let mut incidence = alloc::vec![Vec::new(); points.len()];
    for (j, line) in gadget.lines.iter().enumerate() {
        for p in line_points(line, 4) {
            let idx = points.binary_search(&point_rank(&p, 4)).unwrap();
            incidence[idx].push(j as u8);
        }
    }
    GadgetSupport { points, incidence }
}

/// Number of gadget lines with an odd number of set bits among their points,
/// for a color assignment given as one bit per support index.
pub fn count_odd_lines(support: &GadgetSupport, assignment: u32) -> u32 {
    let sweep = GadgetSweep::new(support);
    sweep.count_odd(assignment)
}

/// Precomputed bit masks driving the exhaustive sweep: per line, its support
/// points; per support point, its incident lines.
#[derive(Clone, Debug)]
pub struct GadgetSweep {
    line_masks: [u32; GADGET_LINE_COUNT],
    point_masks: [u16; GADGET_SUPPORT_SIZE],
}

impl GadgetSweep {
    pub fn new(support: &GadgetSupport) -> Self {
        assert_eq!(support.points.len(), GADGET_SUPPORT_SIZE);
        let mut line_masks = [0u32; GADGET_LINE_COUNT];
        let mut point_masks = [0u16; GADGET_SUPPORT_SIZE];
        for (idx, lines) in support.incidence.iter().enumerate() {
            for &j in lines {
                line_masks[j as usize] |= 1 << idx;
                point_masks[idx] |= 1 << j;
            }
        }
        GadgetSweep {
            line_masks,
            point_masks,
        }
    }

    pub fn count_odd(&self, assignment: u32) -> u32 {
        self.line_masks
            .iter()
            .map(|m| (m & assignment).count_ones() & 1)
            .sum()
    }

    fn parity_mask(&self, assignment: u32) -> u16 {
        let mut mask = 0u16;
        for (j, m) in self.line_masks.iter().enumerate() {
            mask |= (((m & assignment).count_ones() & 1) as u16) << j;
        }
        mask
    }

    /// Gray-code sweep of the assignments whose bits above `low_bits` equal
    /// `prefix`. Each step flips one support point and toggles the parities
    /// of its incident lines.
    pub fn sweep_block(&self, prefix: u32, low_bits: u32) -> BlockStats {
        assert!(low_bits as usize <= GADGET_SUPPORT_SIZE);
        assert_eq!(prefix >> (GADGET_SUPPORT_SIZE as u32 - low_bits), 0);
        let mut parity = self.parity_mask(prefix << low_bits);
        let mut odd = parity.count_ones();
        let mut max_odd = odd;
        let mut attaining = 1u64;
        let steps = 1u64 << low_bits;
        for s in 1..steps {
            let p = s.trailing_zeros();
            parity ^= self.point_masks[p as usize];
            odd = parity.count_ones();
            if odd > max_odd {
                max_odd = odd;
                attaining = 1;
            } else if odd == max_odd {
                attaining += 1;
            }
        }
        BlockStats {
            max_odd,
            attaining,
            steps,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockStats {
    pub max_odd: u32,
    /// Assignments in this block attaining max_odd.
    pub attaining: u64,
    pub steps: u64,
}

impl BlockStats {
    /// Combines disjoint blocks: maximum wins, counts add at the maximum.
    pub fn merge(self, other: BlockStats) -> BlockStats {
        use core::cmp::Ordering;
        let merged = match self.max_odd.cmp(&other.max_odd) {
            Ordering::Greater => self.attaining,
            Ordering::Less => other.attaining,
            Ordering::Equal => self.attaining + other.attaining,
        };
        BlockStats {
            max_odd: self.max_odd.max(other.max_odd),
            attaining: merged,
            steps: self.steps + other.steps,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetSearchReport {
    pub max_odd: u32,
    pub attaining_count: u64,
    pub assignments_swept: u64,
}

/// Sweeps every assignment of the 29 support points, halved by fixing the
/// color of the last support point (complementing all colors preserves each
/// line's parity, since lines have 4 points).
pub fn exhaustive_gadget_search() -> GadgetSearchReport {
    let support = gadget_support();
    let sweep = GadgetSweep::new(&support);
    let stats = sweep.sweep_block(0, (GADGET_SUPPORT_SIZE - 1) as u32);
    GadgetSearchReport {
        max_odd: stats.max_odd,
        attaining_count: stats.attaining,
        assignments_swept: stats.steps,
    }
}
