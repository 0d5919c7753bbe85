//! Exact integer primitives shared by every inequality check.
//!
//! Every decision of the form `x^a · y^b ⋛ z^c · …` is made here, first by
//! bit-length bounds and, only when those overlap, by exact exponentiation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// Resource caps applied to every exact computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest integer (in decimal digits) any operation may materialize.
    pub digit_budget: u64,
    /// Largest polynomial enumeration the brute-force search will attempt.
    pub enum_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            digit_budget: 1_000_000,
            enum_cap: 1_000_000,
        }
    }
}

impl Limits {
    pub fn budget_bits(&self) -> u128 {
        (self.digit_budget as f64 * LOG2_10).ceil() as u128
    }

    /// Fails with `Overflow` when an integer of `bits` bits would exceed the budget.
    pub fn check_bits(&self, bits: u128) -> Result<()> {
        if bits > self.budget_bits() {
            let needed = (bits as f64 * LOG10_2).ceil();
            let needed = if needed >= u64::MAX as f64 { u64::MAX } else { needed as u64 };
            Err(Error::Overflow {
                needed,
                budget: self.digit_budget,
            })
        } else {
            Ok(())
        }
    }
}

/// A positive rational exponent `num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalExponent {
    num: u64,
    den: u64,
}

impl RationalExponent {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidParameter(format!(
                "exponent {num}/{den} must be a positive rational"
            )));
        }
        let g = num.gcd(&den);
        Ok(RationalExponent {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn from_u128(num: u128, den: u128) -> Result<Self> {
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        match (u64::try_from(num), u64::try_from(den)) {
            (Ok(n), Ok(d)) => Self::new(n, d),
            _ => Err(Error::InvalidParameter(
                "exponent arithmetic overflows 64-bit numerator/denominator".into(),
            )),
        }
    }

    /// `self + n`
    pub fn add_int(&self, n: u64) -> Result<Self> {
        let num = self.num as u128 + n as u128 * self.den as u128;
        Self::from_u128(num, self.den as u128)
    }

    /// `self - n`, or `None` when the result is not positive.
    pub fn sub_int(&self, n: u64) -> Option<Self> {
        let sub = n as u128 * self.den as u128;
        if self.num as u128 <= sub {
            return None;
        }
        Self::from_u128(self.num as u128 - sub, self.den as u128).ok()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::from_u128(
            self.num as u128 * other.num as u128,
            self.den as u128 * other.den as u128,
        )
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Self::from_u128(
            self.num as u128 * other.den as u128,
            self.den as u128 * other.num as u128,
        )
    }

    /// Compare against the integer `n`.
    pub fn cmp_int(&self, n: u64) -> Ordering {
        (self.num as u128).cmp(&(n as u128 * self.den as u128))
    }

    pub fn to_big_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

impl Ord for RationalExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for RationalExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for RationalExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a positive rational \"p/q\", got {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: u64 = n.parse().map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        Self::new(n, d).map_err(|_| bad())
    }
}

/// Decides `Π lhs.base^lhs.exp` versus `Π rhs.base^rhs.exp` exactly.
///
/// Bit-length bounds settle most comparisons without materializing the
/// powers; otherwise the products are computed exactly under `limits`.
pub fn compare_products(
    lhs: &[(&BigUint, u64)],
    rhs: &[(&BigUint, u64)],
    limits: &Limits,
) -> Result<Ordering> {
    let l_zero = lhs.iter().any(|(b, e)| b.is_zero() && *e > 0);
    let r_zero = rhs.iter().any(|(b, e)| b.is_zero() && *e > 0);
    match (l_zero, r_zero) {
        (true, true) => return Ok(Ordering::Equal),
        (true, false) => return Ok(Ordering::Less),
        (false, true) => return Ok(Ordering::Greater),
        _ => {}
    }

    // 2^lo <= product <= 2^hi
    let bounds = |side: &[(&BigUint, u64)]| -> Option<(u128, u128)> {
        let mut lo = 0u128;
        let mut hi = 0u128;
        for (b, e) in side {
            let bits = b.bits() as u128;
            let e = *e as u128;
            lo = lo.checked_add(e.checked_mul(bits - 1)?)?;
            hi = hi.checked_add(e.checked_mul(bits)?)?;
        }
        Some((lo, hi))
    };
    let too_big = || Error::Overflow {
        needed: u64::MAX,
        budget: limits.digit_budget,
    };
    let (l_lo, l_hi) = bounds(lhs).ok_or_else(too_big)?;
    let (r_lo, r_hi) = bounds(rhs).ok_or_else(too_big)?;
    if l_hi < r_lo {
        return Ok(Ordering::Less);
    }
    if r_hi < l_lo {
        return Ok(Ordering::Greater);
    }

    limits.check_bits(l_hi.max(r_hi))?;
    Ok(product(lhs).cmp(&product(rhs)))
}

fn product(side: &[(&BigUint, u64)]) -> BigUint {
    side.iter().fold(BigUint::one(), |acc, (b, e)| acc * Pow::pow(*b, *e))
}

/// Ordering of `x` versus `y^e`, decided as `x^den` versus `y^num`.
pub fn compare_power(
    x: &BigUint,
    y: &BigUint,
    e: &RationalExponent,
    limits: &Limits,
) -> Result<Ordering> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::InvalidParameter(
            "compare_power requires positive operands".into(),
        ));
    }
    compare_products(&[(x, e.den())], &[(y, e.num())], limits)
}

/// `base^exp` computed exactly, refusing results past the digit budget.
pub fn checked_pow(base: &BigUint, exp: u64, limits: &Limits) -> Result<BigUint> {
    let bits = (base.bits() as u128).saturating_mul(exp as u128);
    limits.check_bits(bits)?;
    Ok(Pow::pow(base, exp))
}

/// Floating-point `log10(x)` for reporting; never used in a decision.
pub fn log10_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::log10);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.log10() + shift as f64 * LOG10_2
}

/// Number of decimal digits of a positive integer.
pub fn decimal_digits(x: &BigUint) -> usize {
    if x.is_zero() {
        1
    } else {
        x.to_str_radix(10).len()
    }
}

/// Split a non-negative rational into (numerator, denominator) naturals.
pub fn rational_parts(r: &BigRational) -> Result<(BigUint, BigUint)> {
    if r.is_negative() {
        return Err(Error::Internal("expected a non-negative rational".into()));
    }
    let n = r.numer().to_biguint().unwrap_or_default();
    let d = r
        .denom()
        .to_biguint()
        .ok_or_else(|| Error::Internal("negative denominator".into()))?;
    Ok((n, d))
}

pub fn big_rational(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, num),
        BigInt::from_biguint(Sign::Plus, den),
    )
}

/// Decimal expansion of a non-negative rational, truncated to `digits` places.
pub fn decimal_expansion(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let r = r.abs();
    let (int, mut rem) = r.numer().div_rem(r.denom());
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        let ten = BigInt::from(10u8);
        for _ in 0..digits {
            rem *= &ten;
            let (d, r2) = rem.div_rem(r.denom());
            s.push_str(&d.to_string());
            rem = r2;
        }
    }
    s
}
