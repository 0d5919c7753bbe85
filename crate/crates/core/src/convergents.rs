//! Reduced partial sums `p_m/q_m` and the shrink factor `b_n = (a_1···a_n)^α / a_{n+1}`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, big_rational, compare_products, rational_parts, RationalExponent};
use crate::error::{Error, Result};
use crate::json::dec_nat;
use crate::sequence::{Series, Window};

/// Reduced partial sum `p/q = Σ_{n<=m} 1/a_n` of the shifted series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub m: u64,
    #[serde(with = "dec_nat")]
    pub p: BigUint,
    #[serde(with = "dec_nat")]
    pub q: BigUint,
}

impl Convergent {
    pub fn value(&self) -> BigRational {
        big_rational(self.p.clone(), self.q.clone())
    }

    pub fn is_reduced(&self) -> bool {
        self.p.gcd(&self.q).is_one()
    }
}

/// Convergents `1..=to` together with the running products `a_1···a_m`.
pub(crate) fn convergents_with_products(
    series: &Series,
    to: u64,
) -> Result<Vec<(Convergent, BigUint)>> {
    let terms = series.terms(to)?;
    let limits = series.limits();
    let mut out = Vec::with_capacity(terms.len());
    let mut sum = BigRational::zero();
    let mut product = BigUint::one();
    for (i, a) in terms.iter().enumerate() {
        limits.check_bits(product.bits() as u128 + a.bits() as u128)?;
        product *= a;
        sum += big_rational(BigUint::one(), a.clone());
        let (p, q) = rational_parts(&sum)?;
        let m = i as u64 + 1;
        if q > product {
            return Err(Error::Internal(format!(
                "denominator bound q_m <= a_1···a_m violated at m={m}"
            )));
        }
        out.push((Convergent { m, p, q }, product.clone()));
    }
    Ok(out)
}

/// Convergents `p_1/q_1 ..= p_to/q_to`.
pub fn convergents(series: &Series, to: u64) -> Result<Vec<Convergent>> {
    Ok(convergents_with_products(series, to)?
        .into_iter()
        .map(|(c, _)| c)
        .collect())
}

pub fn partial_sum(series: &Series, m: u64) -> Result<Convergent> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    convergents(series, m)?
        .pop()
        .ok_or_else(|| Error::Internal("empty convergent list".into()))
}

/// `q_m <= a_1···a_m`, decided by exact integer comparison.
pub fn denominator_bound_holds(series: &Series, m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let terms = series.terms(m)?;
    let mut sum = BigRational::zero();
    let mut product = BigUint::one();
    for a in &terms {
        series
            .limits()
            .check_bits(product.bits() as u128 + a.bits() as u128)?;
        product *= a;
        sum += big_rational(BigUint::one(), a.clone());
    }
    let (_, q) = rational_parts(&sum)?;
    Ok(q <= product)
}

/// `b_n = product^α / next`, held symbolically.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TailShrink {
    pub n: u64,
    #[serde(with = "dec_nat")]
    pub product: BigUint,
    #[serde(with = "dec_nat")]
    pub next: BigUint,
    pub alpha: RationalExponent,
    /// `log10(b_n)` in floating point. Reporting only.
    pub log_approx: f64,
}

impl TailShrink {
    fn new(n: u64, product: BigUint, next: BigUint, alpha: RationalExponent) -> Self {
        let log_approx = alpha.to_f64() * arith::log10_big(&product) - arith::log10_big(&next);
        TailShrink {
            n,
            product,
            next,
            alpha,
            log_approx,
        }
    }
}

pub fn shrink_factor(series: &Series, alpha: &RationalExponent, n: u64) -> Result<TailShrink> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let terms = series.terms(n + 1)?;
    let mut product = BigUint::one();
    for a in &terms[..n as usize] {
        series
            .limits()
            .check_bits(product.bits() as u128 + a.bits() as u128)?;
        product *= a;
    }
    Ok(TailShrink::new(n, product, terms[n as usize].clone(), *alpha))
}

/// Exact decision of `b_n < r`: with `α = p/s`, `r = u/v`, checks
/// `product^p · v^s < u^s · next^s`.
pub fn shrink_less_than(ts: &TailShrink, r: &BigRational, series: &Series) -> Result<bool> {
    if !r.is_positive() {
        return Err(Error::InvalidParameter("threshold must be positive".into()));
    }
    let (u, v) = rational_parts(r)?;
    let (p, s) = (ts.alpha.num(), ts.alpha.den());
    let ord = compare_products(
        &[(&ts.product, p), (&v, s)],
        &[(&u, s), (&ts.next, s)],
        series.limits(),
    )?;
    Ok(ord == Ordering::Less)
}

/// Exact ordering of `b_a` versus `b_b` (same `α`).
pub fn compare_shrink(a: &TailShrink, b: &TailShrink, series: &Series) -> Result<Ordering> {
    if a.alpha != b.alpha {
        return Err(Error::InvalidParameter("shrink factors use different exponents".into()));
    }
    let (p, s) = (a.alpha.num(), a.alpha.den());
    compare_products(
        &[(&a.product, p), (&b.next, s)],
        &[(&b.product, p), (&a.next, s)],
        series.limits(),
    )
}

/// Least `m` in the window with `b_m < 1/(1 + theta_upper)`.
pub fn effective_start(
    series: &Series,
    alpha: &RationalExponent,
    theta_upper: &BigRational,
    window: Window,
) -> Result<u64> {
    if !theta_upper.is_positive() {
        return Err(Error::InvalidParameter("thetaUpper must be positive".into()));
    }
    let threshold = (BigRational::one() + theta_upper).recip();
    let terms = series.terms(window.to + 1)?;
    let mut product = BigUint::one();
    for m in 1..=window.to {
        let a = &terms[(m - 1) as usize];
        series
            .limits()
            .check_bits(product.bits() as u128 + a.bits() as u128)?;
        product *= a;
        if m < window.from {
            continue;
        }
        let ts = TailShrink::new(m, product.clone(), terms[m as usize].clone(), *alpha);
        if shrink_less_than(&ts, &threshold, series)? {
            return Ok(m);
        }
    }
    Err(Error::NotFoundInWindow {
        from: window.from,
        to: window.to,
    })
}
