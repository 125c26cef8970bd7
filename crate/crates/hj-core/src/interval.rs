//! Outward-rounded dyadic interval arithmetic: the certification substrate
//! for every inequality involving π, square roots, or exponentials.
//!
//! Values are m·2^e with an arbitrary-precision mantissa. Every operation
//! returns an enclosure of the exact real result; a context fixes the working
//! precision and rounds the lower endpoint down and the upper endpoint up.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// m·2^e, normalized so the mantissa is odd or zero.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Exact conversion; every dyadic is rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// MSB position: |value| lies in [2^(top-1), 2^top). Nonzero only.
    fn top(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64
    }

    fn add_exact(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    fn sub_exact(&self, other: &Dyadic) -> Dyadic {
        self.add_exact(&other.neg())
    }

    fn mul_exact(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Keeps at most prec significant bits, rounding toward −∞ (up = false)
    /// or +∞ (up = true).
    fn round(&self, prec: u32, up: bool) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = (bits - prec as u64) as usize;
        let q = &self.mant >> drop; // floor shift
        let exact = (&q << drop) == self.mant;
        let q = if up && !exact { q + 1 } else { q };
        Dyadic::new(q, self.exp + drop as i64)
    }

    /// Decimal rendering with directed rounding: toward +∞ when up, −∞
    /// otherwise. Scientific form with the requested significant digits.
    pub fn to_decimal(&self, sig_digits: u32, up: bool) -> String {
        assert!(sig_digits >= 1);
        if self.is_zero() {
            return String::from("0");
        }
        let negative = self.is_negative();
        let mag = self.mant.magnitude().clone();
        // magnitude rounds down exactly when the signed value rounds toward 0
        let mag_up = up != negative;
        // first estimate of the decimal exponent of |v| = mag·2^exp
        let log10 = (mag.bits() as i64 - 1 + self.exp) as f64 * core::f64::consts::LOG10_2;
        let mut e10 = log10 as i64 - if log10 < 0.0 { 1 } else { 0 };
        loop {
            let shift10 = sig_digits as i64 - 1 - e10;
            let (num, den) = scaled_parts(&mag, self.exp, shift10);
            let (q, r) = num_integer::Integer::div_rem(&num, &den);
            let digits = if mag_up && !r.is_zero() { q + 1u8 } else { q };
            let lo = BigUint::from(10u8).pow(sig_digits - 1);
            if digits < lo {
                e10 -= 1;
                continue;
            }
            if digits >= &lo * BigUint::from(10u8) {
                e10 += 1;
                continue;
            }
            let s = digits.to_string();
            let mut out = String::new();
            if negative {
                out.push('-');
            }
            out.push_str(&s[..1]);
            if s.len() > 1 {
                out.push('.');
                out.push_str(&s[1..]);
            }
            out.push('e');
            out.push_str(&e10.to_string());
            return out;
        }
    }
}

/// |mag·2^exp·10^shift10| as an exact fraction num/den of nonnegative integers.
fn scaled_parts(mag: &BigUint, exp: i64, shift10: i64) -> (BigUint, BigUint) {
    let mut num = mag.clone();
    let mut den = BigUint::one();
    if exp >= 0 {
        num <<= exp as usize;
    } else {
        den <<= (-exp) as usize;
    }
    if shift10 >= 0 {
        num *= BigUint::from(10u8).pow(shift10 as u32);
    } else {
        den *= BigUint::from(10u8).pow((-shift10) as u32);
    }
    (num, den)
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        // normalized representation is canonical
        self.exp == other.exp && self.mant == other.mant
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        // sign, then MSB position, then mantissas; exact subtraction would
        // materialize the full exponent gap, which can run to billions of bits
        fn rank(s: Sign) -> u8 {
            match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            }
        }
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            return rank(sa).cmp(&rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            let by_top = ta.cmp(&tb);
            return if sa == Sign::Plus {
                by_top
            } else {
                by_top.reverse()
            };
        }
        // equal windows: the alignment shift is bounded by the length gap
        let e0 = self.exp.min(other.exp);
        let ma = &self.mant << (self.exp - e0) as usize;
        let mb = &other.mant << (other.exp - e0) as usize;
        ma.cmp(&mb)
    }
}

/// x/2^e0 as an integer, rounded toward −∞ or +∞. Right shifts may drop the
/// whole mantissa; left shifts stay within the caller's precision window.
fn align_dir(x: &Dyadic, e0: i64, up: bool) -> BigInt {
    if x.exp >= e0 {
        &x.mant << (x.exp - e0) as usize
    } else {
        let s = (e0 - x.exp) as usize;
        if up {
            -((-&x.mant) >> s)
        } else {
            &x.mant >> s
        }
    }
}

/// Directed sum keeping prec significant bits. Operands far below the top of
/// the result window collapse to a one-ulp nudge instead of forcing an exact
/// alignment across the exponent gap.
fn add_dir(a: &Dyadic, b: &Dyadic, prec: u32, up: bool) -> Dyadic {
    if a.is_zero() {
        return b.round(prec, up);
    }
    if b.is_zero() {
        return a.round(prec, up);
    }
    let e0 = a.top().max(b.top()) - prec as i64 - 8;
    let sum = align_dir(a, e0, up) + align_dir(b, e0, up);
    Dyadic::new(sum, e0).round(prec, up)
}

/// A certified enclosure lo ≤ x ≤ hi of a real quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalValue {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl IntervalValue {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        IntervalValue { lo, hi }
    }

    pub fn exact(d: Dyadic) -> Self {
        IntervalValue {
            lo: d.clone(),
            hi: d,
        }
    }

    pub fn exact_int(v: i64) -> Self {
        IntervalValue::exact(Dyadic::from_int(v))
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub_exact(&self.lo)
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }
}

/// Working-precision context; all results are rounded outward to prec
/// significant bits per endpoint.
#[derive(Clone, Copy, Debug)]
pub struct IntervalCtx {
    pub prec: u32,
}

impl IntervalCtx {
    pub fn new(prec: u32) -> Self {
        assert!(prec >= 32, "precision below 32 bits is not supported");
        IntervalCtx { prec }
    }

    fn out(&self, lo: Dyadic, hi: Dyadic) -> IntervalValue {
        IntervalValue::new(lo.round(self.prec, false), hi.round(self.prec, true))
    }

    pub fn from_rational(&self, r: &BigRational) -> IntervalValue {
        let num = Dyadic::from_bigint(r.numer().clone());
        let den = Dyadic::from_bigint(r.denom().clone());
        self.out(
            div_dir(&num, &den, self.prec, false),
            div_dir(&num, &den, self.prec, true),
        )
    }

    pub fn add(&self, a: &IntervalValue, b: &IntervalValue) -> IntervalValue {
        IntervalValue::new(
            add_dir(&a.lo, &b.lo, self.prec, false),
            add_dir(&a.hi, &b.hi, self.prec, true),
        )
    }

    pub fn sub(&self, a: &IntervalValue, b: &IntervalValue) -> IntervalValue {
        IntervalValue::new(
            add_dir(&a.lo, &b.hi.neg(), self.prec, false),
            add_dir(&a.hi, &b.lo.neg(), self.prec, true),
        )
    }

    pub fn neg(&self, a: &IntervalValue) -> IntervalValue {
        IntervalValue::new(a.hi.neg(), a.lo.neg())
    }

    pub fn mul(&self, a: &IntervalValue, b: &IntervalValue) -> IntervalValue {
        let products = [
            a.lo.mul_exact(&b.lo),
            a.lo.mul_exact(&b.hi),
            a.hi.mul_exact(&b.lo),
            a.hi.mul_exact(&b.hi),
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        self.out(lo, hi)
    }

    /// Division by an interval not containing 0.
    pub fn div(&self, a: &IntervalValue, b: &IntervalValue) -> IntervalValue {
        assert!(
            b.strictly_positive() || b.strictly_negative(),
            "division by an interval containing zero"
        );
        let ends = [
            (&a.lo, &b.lo),
            (&a.lo, &b.hi),
            (&a.hi, &b.lo),
            (&a.hi, &b.hi),
        ];
        let lo = ends
            .iter()
            .map(|(x, y)| div_dir(x, y, self.prec, false))
            .min()
            .unwrap();
        let hi = ends
            .iter()
            .map(|(x, y)| div_dir(x, y, self.prec, true))
            .max()
            .unwrap();
        self.out(lo, hi)
    }

    /// Square root of a nonnegative interval.
    pub fn sqrt(&self, a: &IntervalValue) -> IntervalValue {
        assert!(!a.lo.is_negative(), "sqrt of a negative interval");
        self.out(
            sqrt_dir(&a.lo, self.prec, false),
            sqrt_dir(&a.hi, self.prec, true),
        )
    }

    /// a^e for a nonnegative base, by binary exponentiation.
    pub fn powi(&self, a: &IntervalValue, e: u64) -> IntervalValue {
        assert!(!a.lo.is_negative(), "powi expects a nonnegative base");
        let mut result = IntervalValue::exact_int(1);
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// Multiplication by an exact rational scalar.
    pub fn scale(&self, a: &IntervalValue, r: &BigRational) -> IntervalValue {
        self.mul(a, &self.from_rational(r))
    }

    /// Enclosure of π by Machin's formula 16·arctan(1/5) − 4·arctan(1/239).
    pub fn pi(&self) -> IntervalValue {
        let q = self.prec + 16;
        let (a5_lo, a5_hi) = atan_recip_fixed(5, q);
        let (a239_lo, a239_hi) = atan_recip_fixed(239, q);
        let lo = a5_lo * 16 - &a239_hi * 4;
        let hi = a5_hi * 16 - &a239_lo * 4;
        self.out(Dyadic::new(lo, -(q as i64)), Dyadic::new(hi, -(q as i64)))
    }

    /// Enclosure of e^(−1/8) by its alternating Taylor series in fixed point.
    pub fn exp_neg_eighth(&self) -> IntervalValue {
        let q = self.prec + 32;
        let one = BigInt::one() << q as usize;
        let mut term = one.clone();
        let mut acc = one;
        let mut j: u64 = 0;
        let mut sign = 1i64;
        while !term.is_zero() {
            j += 1;
            sign = -sign;
            term /= 8 * j as i64; // floor; per-term drift ≤ j ulps
            if term.is_zero() {
                break;
            }
            acc += term.clone() * sign;
        }
        // cumulative floor drift plus the truncated tail, counted in ulps
        let slack = BigInt::from(j * j + j + 2);
        self.out(
            Dyadic::new(&acc - &slack, -(q as i64)),
            Dyadic::new(acc + slack, -(q as i64)),
        )
    }

    /// Enclosure of e^(−m/8).
    pub fn exp_neg_eighths(&self, m: u64) -> IntervalValue {
        if m == 0 {
            return IntervalValue::exact_int(1);
        }
        self.powi(&self.exp_neg_eighth(), m)
    }
}

/// arctan(1/x) in fixed point scaled by 2^q, with a conservative ulp bound on
/// both sides covering every floored term and the truncated tail.
fn atan_recip_fixed(x: u64, q: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << q as usize;
    let x2 = BigInt::from(x * x);
    let mut xpow = BigInt::from(x);
    let mut acc = BigInt::zero();
    let mut j: u64 = 0;
    let mut terms: u64 = 0;
    loop {
        let denom = &xpow * (2 * j + 1);
        let term = &one / &denom;
        if term.is_zero() {
            break;
        }
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        terms += 1;
        xpow *= &x2;
        j += 1;
    }
    let slack = BigInt::from(terms + 1);
    (&acc - &slack, acc + slack)
}

/// Directed quotient a/b to prec significant bits; b ≠ 0.
fn div_dir(a: &Dyadic, b: &Dyadic, prec: u32, up: bool) -> Dyadic {
    assert!(!b.is_zero());
    if a.is_zero() {
        return Dyadic::zero();
    }
    let negative = a.is_negative() != b.is_negative();
    let na = a.mant.magnitude();
    let nb = b.mant.magnitude();
    let extra = (prec as u64 + 2 + nb.bits()).saturating_sub(na.bits());
    let scaled = na << extra as usize;
    let (q, r) = num_integer::Integer::div_rem(&scaled, nb);
    let exact = r.is_zero();
    // round the magnitude toward 0 when the signed result rounds toward −∞
    // for positives / +∞ for negatives
    let mag_up = up != negative;
    let q = if mag_up && !exact { q + 1u8 } else { q };
    let mant = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q);
    Dyadic::new(mant, a.exp - b.exp - extra as i64).round(prec, up)
}

/// Directed square root of a nonnegative dyadic to prec significant bits.
fn sqrt_dir(a: &Dyadic, prec: u32, up: bool) -> Dyadic {
    assert!(!a.is_negative());
    if a.is_zero() {
        return Dyadic::zero();
    }
    let mag = a.mant.magnitude();
    let mut shift = (2 * (prec as u64 + 2)).saturating_sub(mag.bits());
    if (a.exp - shift as i64) % 2 != 0 {
        shift += 1;
    }
    let v = mag << shift as usize;
    let r = num_integer::Roots::sqrt(&v); // floor
    let exact = &r * &r == v;
    let r = if up && !exact { r + 1u8 } else { r };
    Dyadic::new(BigInt::from(r), (a.exp - shift as i64) / 2).round(prec, up)
}
