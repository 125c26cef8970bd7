//! Big-integer combinatorics shared by the counting modules.

use alloc::string::String;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// (Σ parts)! / Π parts!.
pub fn multinomial(parts: &[u64]) -> BigUint {
    let parts: Vec<BigUint> = parts.iter().map(|&p| BigUint::from(p)).collect();
    num_integer::multinomial(&parts)
}

/// n!.
pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// 2^e.
pub fn pow2(e: u64) -> BigUint {
    BigUint::one() << usize::try_from(e).expect("exponent fits usize")
}

/// C(n, ⌊n/2⌋), the largest binomial coefficient in row n.
pub fn central_binomial(n: u64) -> BigUint {
    binomial(n, n / 2)
}

/// Number of j ∈ {0, …, m} with j < x, weighted by C(m, j): the unnormalized
/// lower tail of a symmetric binomial cut strictly below the rational x.
pub fn binomial_count_below(m: u64, x: &BigRational) -> BigUint {
    if !x.is_positive() {
        return BigUint::zero();
    }
    // largest j with j < x
    let j_max = if x.is_integer() {
        let f = x.to_integer() - BigInt::one();
        if f.is_negative() {
            return BigUint::zero();
        }
        f.to_biguint().unwrap()
    } else {
        x.floor().to_integer().to_biguint().unwrap()
    };
    let j_max = match u64::try_from(&j_max) {
        Ok(v) => v.min(m),
        Err(_) => m,
    };
    let mut acc = BigUint::zero();
    let mut c = BigUint::one();
    for j in 0..=j_max {
        acc += &c;
        c = c * BigUint::from(m - j) / BigUint::from(j + 1);
    }
    acc
}

/// Pr[Bin(m, 1/2) < x], exact.
pub fn binomial_tail_below(m: u64, x: &BigRational) -> BigRational {
    ratio_big(binomial_count_below(m, x), pow2(m))
}

pub fn ratio_big(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_ratio(num: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(num))
}

/// Parses a decimal literal such as "-0.564189583e-1" into an exact rational.
pub fn rational_from_decimal(s: &str) -> BigRational {
    let s = s.trim();
    let (mant, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().expect("exponent")),
        None => (s, 0i64),
    };
    let (mant, neg) = match mant.strip_prefix('-') {
        Some(rest) => (rest, true),
        None => (mant.strip_prefix('+').unwrap_or(mant), false),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let digits: String = [int_part, frac_part].concat();
    let num: BigInt = digits.parse().expect("decimal digits");
    let num = if neg { -num } else { num };
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10u8);
    if shift >= 0 {
        BigRational::from_integer(num * ten.pow(shift as u32))
    } else {
        BigRational::new(num, ten.pow((-shift) as u32))
    }
}
