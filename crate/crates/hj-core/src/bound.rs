//! The assembled bound: gadget-mixed densities pulled out of the lifted pair
//! inequality, a closed-form margin with certified error terms, and a search
//! for the least grid dimension where the margin turns positive.

use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::Zero;

use crate::embedding::gadget_length_mix;
use crate::interval::{IntervalCtx, IntervalValue};
use crate::nums::{int_ratio, ratio};
use crate::subcube::{chernoff_tail, midskip_loss};
use crate::InputError;

/// Dimension and window length for one certification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub n: u64,
    pub kappa: u32,
}

impl BoundParams {
    pub fn new(n: u64, kappa: u32) -> Result<Self, InputError> {
        if kappa < 4 {
            return Err(InputError("window length must be at least 4"));
        }
        if kappa % 4 != 0 {
            return Err(InputError("window length must be a multiple of 4"));
        }
        if (kappa as u64).pow(2) >= n {
            return Err(InputError(
                "dimension must exceed the squared window length",
            ));
        }
        Ok(BoundParams { n, kappa })
    }
}

/// Mixes per-length values with the gadget's length spectrum (4,6,4,1)/15.
pub fn q_plus(values: &[BigRational; 4]) -> BigRational {
    gadget_length_mix()
        .iter()
        .zip(values)
        .map(|(w, v)| w * v)
        .sum()
}

/// Same mix applied to odd-split densities.
pub fn p3_plus(values: &[BigRational; 4]) -> BigRational {
    q_plus(values)
}

/// Weight of q(k/j) pulled out of position k: the length-jk image lines of
/// the mix land on the original coefficient ladder.
fn pulled_coefficient(kappa: u32, k: u32, mix: &[BigRational; 4]) -> BigRational {
    let mut coeff = BigRational::zero();
    for j in 1..=4u32 {
        if k % j == 0 && k / j <= kappa / 4 {
            let stride = (kappa + 1) as i64 - 2 * (k / j) as i64;
            coeff += &mix[j as usize - 1] * ratio(stride, 1);
        }
    }
    coeff
}

/// Residual coefficients after the pull-out: R_k = (κ+1-k) minus the weight
/// the mixed sum already spends on q(k).
#[derive(Clone, Debug)]
pub struct RSeries {
    pub kappa: u32,
    values: Vec<BigRational>,
}

impl RSeries {
    pub fn value(&self, k: u32) -> &BigRational {
        assert!(1 <= k && k <= self.kappa);
        &self.values[k as usize - 1]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn sum(&self) -> BigRational {
        self.values.iter().sum()
    }

    pub fn negatives(&self) -> Vec<(u32, BigRational)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| *v < &BigRational::zero())
            .map(|(i, v)| (i as u32 + 1, v.clone()))
            .collect()
    }

    pub fn all_positive(&self) -> bool {
        self.values.iter().all(|v| v > &BigRational::zero())
    }
}

pub fn r_series(kappa: u32) -> Result<RSeries, InputError> {
    if kappa < 4 || kappa % 4 != 0 {
        return Err(InputError("window length must be a positive multiple of 4"));
    }
    let mix = gadget_length_mix();
    let values = (1..=kappa)
        .map(|k| ratio((kappa + 1 - k) as i64, 1) - pulled_coefficient(kappa, k, &mix))
        .collect();
    Ok(RSeries { kappa, values })
}

/// How the pulled-out coefficients compare against two reference slopes.
#[derive(Clone, Debug)]
pub struct CapReport {
    pub kappa: u32,
    /// coeff(k) < κ+1-k at every k ≤ κ.
    pub strict_all: bool,
    pub strict_violations: Vec<u32>,
    /// coeff(k) ≤ κ+1-(103/90)k at every k ≤ κ/4.
    pub cap_quarter: bool,
    /// The k ≤ κ/4 where the quarter cap is met with equality.
    pub cap_equalities: Vec<u32>,
}

pub fn coefficient_cap_check(kappa: u32) -> Result<CapReport, InputError> {
    if kappa < 4 || kappa % 4 != 0 {
        return Err(InputError("window length must be a positive multiple of 4"));
    }
    let mix = gadget_length_mix();
    let mut strict_violations = Vec::new();
    let mut cap_equalities = Vec::new();
    let mut cap_quarter = true;
    for k in 1..=kappa {
        let coeff = pulled_coefficient(kappa, k, &mix);
        if coeff >= ratio((kappa + 1 - k) as i64, 1) {
            strict_violations.push(k);
        }
        if k <= kappa / 4 {
            let cap = ratio((kappa + 1) as i64, 1) - ratio(103, 90) * ratio(k as i64, 1);
            if coeff == cap {
                cap_equalities.push(k);
            } else if coeff > cap {
                cap_quarter = false;
            }
        }
    }
    Ok(CapReport {
        kappa,
        strict_all: strict_violations.is_empty(),
        strict_violations,
        cap_quarter,
        cap_equalities,
    })
}

/// Certified enclosure of ε(n, κ) = e^(-(n-κ)/8) + 3κ·sqrt(2/(π(n-κ))).
pub fn epsilon(n: u64, kappa: u32, prec: u32) -> IntervalValue {
    let ctx = IntervalCtx::new(prec);
    let tail = chernoff_tail(n, kappa, prec);
    let skip = midskip_loss(n, kappa, prec);
    ctx.add(&tail, &ctx.scale(&skip, &ratio(3, 1)))
}

/// The margin limit as n grows: 1/6 - 4/(3κ) - 7/45. Certification can only
/// succeed for window lengths where this is positive.
pub fn limit_margin(kappa: u32) -> BigRational {
    assert!(kappa >= 1);
    ratio(1, 6) - ratio(4, 3) / ratio(kappa as i64, 1) - ratio(7, 45)
}

/// Certified enclosure of the full margin
/// 1/6 - 4/(3κ) - (4/3)ε(n,κ) - (7/45)·n/(n-κ²).
pub fn final_margin(n: u64, kappa: u32, prec: u32) -> Result<IntervalValue, InputError> {
    let params = BoundParams::new(n, kappa)?;
    let correction =
        ratio(7, 45) * int_ratio(params.n) / int_ratio(params.n - (params.kappa as u64).pow(2));
    let exact = ratio(1, 6) - ratio(4, 3) / ratio(params.kappa as i64, 1) - correction;
    let ctx = IntervalCtx::new(prec);
    let eps = epsilon(params.n, params.kappa, prec);
    Ok(ctx.sub(&ctx.from_rational(&exact), &ctx.scale(&eps, &ratio(4, 3))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct CertifyReport {
    pub n: u64,
    pub kappa: u32,
    pub verdict: Verdict,
    /// Precision that settled the verdict (the last rung when undecided).
    pub precision: u32,
    pub margin: IntervalValue,
}

pub const PRECISION_LADDER: &[u32] = &[64, 128, 256, 512, 1024, 2048, 4096];

/// Walks the precision ladder until the margin interval clears zero.
pub fn certify(n: u64, kappa: u32) -> Result<CertifyReport, InputError> {
    let mut last = None;
    for &prec in PRECISION_LADDER {
        let margin = final_margin(n, kappa, prec)?;
        let verdict = if margin.strictly_positive() {
            Verdict::Positive
        } else if margin.strictly_negative() {
            Verdict::Negative
        } else {
            Verdict::Undecided
        };
        if verdict != Verdict::Undecided {
            return Ok(CertifyReport {
                n,
                kappa,
                verdict,
                precision: prec,
                margin,
            });
        }
        last = Some((prec, margin));
    }
    let (precision, margin) = last.unwrap();
    Ok(CertifyReport {
        n,
        kappa,
        verdict: Verdict::Undecided,
        precision,
        margin,
    })
}

const DIMENSION_CAP: u64 = 1 << 62;

/// Least n whose margin certifies positive, by doubling and bisection over
/// certified verdicts. The margin grows with n, so the first positive n is
/// a true threshold; both boundary verdicts are re-certified before return.
pub fn minimal_n_for_kappa(kappa: u32) -> Result<u64, InputError> {
    if kappa < 4 || kappa % 4 != 0 {
        return Err(InputError("window length must be a positive multiple of 4"));
    }
    if limit_margin(kappa) <= BigRational::zero() {
        return Err(InputError(
            "margin limit is nonpositive; no dimension certifies",
        ));
    }
    let floor = (kappa as u64).pow(2) + 1;
    if certify(floor, kappa)?.verdict == Verdict::Positive {
        return Ok(floor);
    }
    let mut lo = floor;
    let mut hi = floor;
    loop {
        hi = hi.saturating_mul(2);
        if hi > DIMENSION_CAP {
            return Err(InputError("no certified dimension below the search cap"));
        }
        match certify(hi, kappa)?.verdict {
            Verdict::Positive => break,
            _ => lo = hi,
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match certify(mid, kappa)?.verdict {
            Verdict::Positive => hi = mid,
            _ => lo = mid,
        }
    }
    if certify(hi, kappa)?.verdict != Verdict::Positive
        || certify(hi - 1, kappa)?.verdict != Verdict::Negative
    {
        return Err(InputError("threshold boundary failed re-certification"));
    }
    Ok(hi)
}

/// Scans candidate window lengths and returns the one with the least
/// certified dimension; ties go to the smaller window.
pub fn optimize_kappa(kappas: &[u32]) -> Result<(u32, u64), InputError> {
    let mut best: Option<(u32, u64)> = None;
    for &kappa in kappas {
        let Ok(n) = minimal_n_for_kappa(kappa) else {
            continue;
        };
        best = Some(match best {
            Some((bk, bn)) if (bn, bk) <= (n, kappa) => (bk, bn),
            _ => (kappa, n),
        });
    }
    best.ok_or(InputError("no candidate window certifies any dimension"))
}
