//! Transcendence-measure bound `|P(θ)| > (H·d·(d+1))^{-k·d·(α+1)/(α-d)}`,
//! the denominator inequalities it rests on, and an empirical verifier.
//!
//! `|P(θ)|` is bracketed by exact interval Horner evaluation over a rational
//! enclosure of `θ`; the bound itself is never materialized as a float.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{big_rational, compare_power, compare_products, rational_parts, RationalExponent};
use crate::convergents::{partial_sum, Convergent};
use crate::enclosure::{enclose, Enclosure};
use crate::error::{Error, Result};
use crate::json::{dec_nat, rational};
use crate::sequence::{check_sandwich, SequenceSpec, Series, Window};

/// Integer polynomial `e_0 + e_1·X + … + e_d·X^d` with `e_d ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolynomialInt {
    coeffs: Vec<BigInt>,
}

impl PolynomialInt {
    /// Trailing zero coefficients are dropped; the zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("zero polynomial".into()));
        }
        Ok(PolynomialInt { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn height(&self) -> BigUint {
        self.coeffs
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap_or_default()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Horner evaluation with interval operands: an enclosure of `P([lo, hi])`.
    pub fn eval_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut it = self.coeffs.iter().rev();
        let lead = BigRational::from_integer(it.next().cloned().unwrap_or_default());
        let (mut a, mut b) = (lead.clone(), lead);
        for c in it {
            let products = [&a * lo, &a * hi, &b * lo, &b * hi];
            let min = products.iter().min().cloned().unwrap_or_default();
            let max = products.iter().max().cloned().unwrap_or_default();
            let c = BigRational::from_integer(c.clone());
            a = min + &c;
            b = max + c;
        }
        (a, b)
    }
}

impl std::fmt::Display for PolynomialInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<String>,
}

impl Serialize for PolynomialInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolynomialInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|c| c.trim().parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| D::Error::custom("coefficients must be decimal integers"))?;
        PolynomialInt::new(coeffs).map_err(D::Error::custom)
    }
}

/// `base^{-exponent}` with `base = H·d·(d+1)` and `exponent = k·d·(α+1)/(α-d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureBound {
    pub d: u64,
    #[serde(with = "dec_nat")]
    pub height: BigUint,
    pub alpha: RationalExponent,
    pub k: RationalExponent,
    #[serde(with = "dec_nat")]
    pub base: BigUint,
    pub exponent: RationalExponent,
}

pub fn bound(d: u64, height: &BigUint, alpha: &RationalExponent, k: &RationalExponent) -> Result<MeasureBound> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("degree {d} must be >= 2")));
    }
    if height.is_zero() {
        return Err(Error::InvalidParameter("height must be >= 1".into()));
    }
    if k.cmp_int(1) != Ordering::Greater {
        return Err(Error::InvalidParameter(format!("k = {k} must be > 1")));
    }
    let gap = alpha
        .sub_int(d)
        .ok_or_else(|| Error::InvalidParameter(format!("alpha = {alpha} must exceed d = {d}")))?;
    let exponent = k
        .mul(&RationalExponent::integer(d)?)?
        .mul(&alpha.add_int(1)?)?
        .div(&gap)?;
    let base = height * BigUint::from(d) * BigUint::from(d + 1);
    Ok(MeasureBound {
        d,
        height: height.clone(),
        alpha: *alpha,
        k: *k,
        base,
        exponent,
    })
}

impl MeasureBound {
    /// `value > base^{-E}` exactly: with `E = p/s`, `value = u/v`, checks `u^s · base^p > v^s`.
    pub fn is_exceeded_by(&self, value: &BigRational, series: &Series) -> Result<bool> {
        if !value.is_positive() {
            return Ok(false);
        }
        let (u, v) = rational_parts(value)?;
        let (p, s) = (self.exponent.num(), self.exponent.den());
        Ok(compare_products(&[(&u, s), (&self.base, p)], &[(&v, s)], series.limits())?
            == Ordering::Greater)
    }

    /// `2/a < base^{-E}/4`, i.e. `8^s · base^p < a^s`.
    fn tail_is_below_quarter(&self, next_term: &BigUint, series: &Series) -> Result<bool> {
        let eight = BigUint::from(8u8);
        let (p, s) = (self.exponent.num(), self.exponent.den());
        Ok(compare_products(&[(&eight, s), (&self.base, p)], &[(next_term, s)], series.limits())?
            == Ordering::Less)
    }

    /// `log10` of the bound, for display only.
    pub fn log10_approx(&self) -> f64 {
        -self.exponent.to_f64() * crate::arith::log10_big(&self.base)
    }
}

/// `q_n <= a_n^{(α+1)/α}`, checked as `q_n^p <= a_n^{p+s}`.
pub fn qn_exponent_bound_holds(series: &Series, alpha: &RationalExponent, n: u64) -> Result<bool> {
    let c = partial_sum(series, n)?;
    let a = series.term(n)?;
    let (p, s) = (alpha.num(), alpha.den());
    Ok(compare_products(&[(&c.q, p)], &[(&a, p + s)], series.limits())? != Ordering::Greater)
}

/// `q_{n+1} < q_n^{k(α+1)}`.
pub fn q_growth_holds(
    series: &Series,
    alpha: &RationalExponent,
    k: &RationalExponent,
    n: u64,
) -> Result<bool> {
    if k.cmp_int(1) != Ordering::Greater {
        return Err(Error::InvalidParameter(format!("k = {k} must be > 1")));
    }
    let e = k.mul(&alpha.add_int(1)?)?;
    let convs = crate::convergents::convergents(series, n + 1)?;
    let (qn, qn1) = (&convs[(n - 1) as usize].q, &convs[n as usize].q);
    Ok(compare_power(qn1, qn, &e, series.limits())? == Ordering::Less)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct N1Result {
    pub n1: u64,
    #[serde(with = "dec_nat")]
    pub q_at_n1: BigUint,
    #[serde(with = "dec_nat")]
    pub threshold_value: BigUint,
}

/// Smallest `n <= n_max` with `q_n^{α-d} > H·d·(d+1)`; equality does not qualify.
pub fn find_n1(
    series: &Series,
    alpha: &RationalExponent,
    d: u64,
    height: &BigUint,
    n_max: u64,
) -> Result<N1Result> {
    let gap = alpha
        .sub_int(d)
        .ok_or_else(|| Error::InvalidParameter(format!("alpha = {alpha} must exceed d = {d}")))?;
    let threshold = height * BigUint::from(d) * BigUint::from(d + 1);
    let mut sum = BigRational::zero();
    for n in 1..=n_max {
        sum += big_rational(BigUint::one(), series.term(n)?);
        let (_, q) = rational_parts(&sum)?;
        let ord = compare_products(&[(&q, gap.num())], &[(&threshold, gap.den())], series.limits())?;
        if ord == Ordering::Greater {
            return Ok(N1Result {
                n1: n,
                q_at_n1: q,
                threshold_value: threshold,
            });
        }
    }
    Err(Error::NotFoundBelowNMax { n_max })
}

/// Certified `(lower, upper)` bracket of `|P(t)|` over `t ∈ [lo, hi]`.
pub fn abs_bracket(poly: &PolynomialInt, enc: &Enclosure) -> (BigRational, BigRational) {
    let (a, b) = poly.eval_interval(&enc.lo, &enc.hi);
    let upper = a.abs().max(b.abs());
    let lower = if a.is_positive() {
        a
    } else if b.is_negative() {
        -b
    } else {
        BigRational::zero()
    };
    (lower, upper)
}

/// Certified lower bound on `|P|` over the enclosure; zero when inconclusive.
pub fn abs_lower_bound(poly: &PolynomialInt, enc: &Enclosure) -> BigRational {
    abs_bracket(poly, enc).0
}

/// Whether `|P(p_n/q_n)| >= 1/q_n^d`; `None` when `p_n/q_n` is a root of `P`.
pub fn convergent_value_bound_holds(poly: &PolynomialInt, c: &Convergent, d: u64) -> Option<bool> {
    let v = poly.eval(&c.value());
    if v.is_zero() {
        return None;
    }
    let rhs = big_rational(BigUint::one(), Pow::pow(&c.q, d));
    Some(v.abs() >= rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Intermediate {
    pub n1: u64,
    #[serde(with = "dec_nat")]
    pub q_at_n1: BigUint,
    /// `1/(2·q_{n1}^d)`
    #[serde(with = "rational")]
    pub threshold: BigRational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MeasureEvidence {
    pub version: u32,
    pub spec: SequenceSpec,
    pub polynomial: PolynomialInt,
    pub bound: MeasureBound,
    #[serde(rename = "enclosureUsed")]
    pub enclosure: Enclosure,
    #[serde(with = "rational")]
    pub abs_lower: BigRational,
    pub verified: bool,
    pub refinements: u32,
    pub intermediate: Option<Intermediate>,
}

/// Smallest `M` whose tail bound `2/a_{M+1}` is below a quarter of the target bound.
fn initial_depth(series: &Series, b: &MeasureBound) -> Result<u64> {
    if !series.spec().has_doubling_tail() {
        return Err(Error::NoTailGuarantee);
    }
    let mut m = 1;
    loop {
        if b.tail_is_below_quarter(&series.term(m + 1)?, series)? {
            return Ok(m);
        }
        m += 1;
    }
}

fn sandwich_at(series: &Series, alpha: &RationalExponent, k: &RationalExponent, w: Window) -> Result<()> {
    let report = check_sandwich(series, alpha, k, w)?;
    match report.first_failure() {
        Some(n) => Err(Error::InvalidParameter(format!(
            "sandwich hypothesis violated at n={n}"
        ))),
        None => Ok(()),
    }
}

/// Certify `|P(θ)| > bound(d, H, α, k)` for one polynomial of degree `<= d` and height `<= H`.
///
/// Starts from the depth where the enclosure width is below a quarter of the
/// bound and refines until the exact comparison succeeds or the refinement
/// budget runs out (`Inconclusive`).
pub fn verify_measure(
    series: &Series,
    alpha: &RationalExponent,
    k: &RationalExponent,
    poly: &PolynomialInt,
    d: u64,
    height: &BigUint,
    max_refinements: u32,
) -> Result<MeasureEvidence> {
    let b = bound(d, height, alpha, k)?;
    if poly.degree() > d {
        return Err(Error::InvalidParameter(format!(
            "polynomial degree {} exceeds declared degree {d}",
            poly.degree()
        )));
    }
    let actual = poly.height();
    if &actual > height {
        return Err(Error::InvalidParameter(format!(
            "actual height {actual} exceeds declared height {height}"
        )));
    }
    // the hypothesis is checked from n = 1 before any deep term is generated
    sandwich_at(series, alpha, k, Window::new(1, 1)?)?;
    let m0 = initial_depth(series, &b)?;
    sandwich_at(series, alpha, k, Window::new(1, m0)?)?;

    let enc = enclose(series, m0)?;
    let (enc, lower, refinements) = refine_until_exceeds(series, alpha, k, poly, &b, enc, max_refinements)?;
    let intermediate = match find_n1(series, alpha, d, height, enc.m) {
        Ok(n1) => {
            let threshold = big_rational(BigUint::one(), BigUint::from(2u8) * Pow::pow(&n1.q_at_n1, d));
            Some(Intermediate {
                n1: n1.n1,
                holds: lower > threshold,
                q_at_n1: n1.q_at_n1,
                threshold,
            })
        }
        Err(Error::NotFoundBelowNMax { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(MeasureEvidence {
        version: 1,
        spec: series.spec().clone(),
        polynomial: poly.clone(),
        bound: b,
        enclosure: enc,
        abs_lower: lower,
        verified: true,
        refinements,
        intermediate,
    })
}

/// Refine `enc` until `|P|`'s certified lower bound exceeds `b`.
fn refine_until_exceeds(
    series: &Series,
    alpha: &RationalExponent,
    k: &RationalExponent,
    poly: &PolynomialInt,
    b: &MeasureBound,
    mut enc: Enclosure,
    max_refinements: u32,
) -> Result<(Enclosure, BigRational, u32)> {
    let mut refinements = 0u32;
    loop {
        let lower = abs_lower_bound(poly, &enc);
        if b.is_exceeded_by(&lower, series)? {
            return Ok((enc, lower, refinements));
        }
        if refinements >= max_refinements {
            return Err(Error::Inconclusive { refinements });
        }
        refinements += 1;
        let next_m = enc.m + 1;
        sandwich_at(series, alpha, k, Window::new(next_m, next_m)?)?;
        enc = enclose(series, next_m)?;
    }
}

/// One enumerated polynomial with its `|P(θ)|` bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyBracket {
    /// Coefficients `e_0..=e_d`, padded to the search degree.
    pub coeffs: Vec<i64>,
    pub lower: BigRational,
    pub upper: BigRational,
}

impl PolyBracket {
    pub fn polynomial(&self) -> PolynomialInt {
        PolynomialInt::from_i64(&self.coeffs).expect("enumeration skips the zero vector")
    }

    /// Minimize the upper bracket; ties go to the lexicographically smallest coefficients.
    fn better(self, other: Self) -> Self {
        match self
            .upper
            .cmp(&other.upper)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
        {
            Ordering::Greater => other,
            _ => self,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchResult {
    pub argmin: PolynomialInt,
    #[serde(with = "rational")]
    pub min_lower: BigRational,
    #[serde(with = "rational")]
    pub min_upper: BigRational,
    pub count: u64,
    pub degree: u64,
    pub height: u64,
    pub enclosure: Enclosure,
}

fn enumeration_size(d: u64, height: u64, cap: u64) -> Result<u64> {
    let too_large = |count: String| Error::EnumerationTooLarge { count, cap };
    let radix = BigUint::from(2 * height as u128 + 1);
    let count = Pow::pow(&radix, d + 1) - BigUint::one();
    if count > BigUint::from(cap) {
        return Err(too_large(count.to_string()));
    }
    u64::try_from(&count).map_err(|_| too_large(count.to_string()))
}

fn nth_coeffs(mut i: u64, d: u64, height: u64) -> Vec<i64> {
    let radix = 2 * height + 1;
    (0..=d)
        .map(|_| {
            let digit = i % radix;
            i /= radix;
            digit as i64 - height as i64
        })
        .collect()
}

fn enumerate(d: u64, height: u64, cap: u64) -> Result<(u64, impl IndexedParallelIterator<Item = Vec<i64>>)> {
    if d < 1 || height < 1 {
        return Err(Error::InvalidParameter("search needs d >= 1 and H >= 1".into()));
    }
    let count = enumeration_size(d, height, cap)?;
    // index `height·(1 + radix + …)` is the zero vector; shift around it
    let zero_index: u64 = (0..=d).map(|k| height * (2 * height + 1).pow(k as u32)).sum();
    let n = usize::try_from(count).map_err(|_| Error::EnumerationTooLarge {
        count: count.to_string(),
        cap,
    })?;
    let iter = (0..n).into_par_iter().map(move |i| {
        let i = i as u64;
        let i = if i >= zero_index { i + 1 } else { i };
        nth_coeffs(i, d, height)
    });
    Ok((count, iter))
}

fn bracket_of(coeffs: Vec<i64>, enc: &Enclosure) -> PolyBracket {
    let poly = PolynomialInt::from_i64(&coeffs).expect("non-zero vector");
    let (lower, upper) = abs_bracket(&poly, enc);
    PolyBracket { coeffs, lower, upper }
}

/// Brackets for every nonzero polynomial of degree `<= d` and height `<= H`, in enumeration order.
pub fn enumerate_brackets(series: &Series, d: u64, height: u64, enc: &Enclosure) -> Result<Vec<PolyBracket>> {
    check_enclosure(series, enc)?;
    let (_, iter) = enumerate(d, height, series.limits().enum_cap)?;
    Ok(iter.map(|c| bracket_of(c, enc)).collect())
}

fn check_enclosure(series: &Series, enc: &Enclosure) -> Result<()> {
    if enc.fingerprint != series.spec().fingerprint() {
        return Err(Error::SpecMismatch);
    }
    Ok(())
}

/// Exhaustive minimum of the `|P(θ)|` upper bracket over bounded polynomials.
pub fn brute_force_min(series: &Series, d: u64, height: u64, enc: &Enclosure) -> Result<SearchResult> {
    check_enclosure(series, enc)?;
    let (count, iter) = enumerate(d, height, series.limits().enum_cap)?;
    let best = iter
        .map(|c| bracket_of(c, enc))
        .reduce_with(PolyBracket::better)
        .ok_or_else(|| Error::Internal("empty enumeration".into()))?;
    Ok(SearchResult {
        argmin: best.polynomial(),
        min_lower: best.lower,
        min_upper: best.upper,
        count,
        degree: d,
        height,
        enclosure: enc.clone(),
    })
}
