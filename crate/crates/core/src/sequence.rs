//! Sequence families, exact term generation and the growth-hypothesis checks.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{self, big_rational, compare_power, Limits, RationalExponent};
use crate::error::{Error, Result};
use crate::json::{dec_nat, dec_nat_vec, dec_small};

/// Strictly increasing index map `g` selecting a subseries `c_n = a_{g(n)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum IndexMap {
    /// `g(n) = s·n + t`
    Affine {
        #[serde(with = "dec_small")]
        s: u64,
        #[serde(with = "dec_small")]
        t: i64,
    },
    Explicit {
        #[serde(with = "dec_small_vec")]
        indices: Vec<u64>,
    },
}

mod dec_small_vec {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u64>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.into_iter()
            .map(|v| match &v {
                serde_json::Value::String(s) => s.trim().parse().ok(),
                serde_json::Value::Number(n) => n.as_u64(),
                _ => None,
            }
            .ok_or_else(|| D::Error::custom(format!("expected a natural index, got {v}"))))
            .collect()
    }
}

impl IndexMap {
    pub fn validate(&self) -> Result<()> {
        match self {
            IndexMap::Affine { s, t } => {
                if *s == 0 {
                    return Err(Error::InvalidIndexMap("affine slope must be >= 1".into()));
                }
                if (*s as i128) + (*t as i128) < 1 {
                    return Err(Error::InvalidIndexMap(format!(
                        "g(1) = {} is not a valid index",
                        *s as i128 + *t as i128
                    )));
                }
            }
            IndexMap::Explicit { indices } => {
                if indices.is_empty() {
                    return Err(Error::InvalidIndexMap("empty index list".into()));
                }
                if indices[0] == 0 {
                    return Err(Error::InvalidIndexMap("indices start at 1".into()));
                }
                if let Some(w) = indices.windows(2).find(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidIndexMap(format!(
                        "indices not strictly increasing: {} then {}",
                        w[0], w[1]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, n: u64) -> Result<u64> {
        match self {
            IndexMap::Affine { s, t } => {
                let g = (*s as i128) * (n as i128) + *t as i128;
                u64::try_from(g).map_err(|_| Error::InvalidIndexMap(format!("g({n}) = {g}")))
            }
            IndexMap::Explicit { indices } => indices
                .get((n as usize).wrapping_sub(1))
                .copied()
                .ok_or(Error::IndexOutOfRange {
                    n,
                    len: indices.len() as u64,
                }),
        }
    }

    fn len(&self) -> Option<u64> {
        match self {
            IndexMap::Affine { .. } => None,
            IndexMap::Explicit { indices } => Some(indices.len() as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `a_1` given, `a_{n+1} = a_n^e`
    PowerRecurrence { a1: BigUint, e: u64 },
    /// `a_n = base^(n! + offset)`
    FactorialExponent { base: BigUint, offset: u64 },
    Explicit { terms: Vec<BigUint> },
    Subseries {
        inner: Box<SequenceSpec>,
        indices: IndexMap,
    },
}

/// Generative description of the integer sequence `(a_n)`.
///
/// `start_offset` shifts the series: the working sequence is
/// `a_{start_offset}, a_{start_offset+1}, ...`, and the skipped terms form a
/// rational prefix recorded in certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct SequenceSpec {
    pub family: Family,
    pub start_offset: u64,
}

fn one() -> u64 {
    1
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "camelCase")]
enum SpecRepr {
    Power {
        #[serde(with = "dec_nat")]
        a1: BigUint,
        #[serde(with = "dec_small")]
        e: u64,
        #[serde(rename = "startOffset", default = "one", with = "dec_small_num")]
        start_offset: u64,
    },
    FactorialExp {
        #[serde(with = "dec_nat")]
        base: BigUint,
        #[serde(with = "dec_small")]
        offset: u64,
        #[serde(rename = "startOffset", default = "one", with = "dec_small_num")]
        start_offset: u64,
    },
    Explicit {
        #[serde(with = "dec_nat_vec")]
        terms: Vec<BigUint>,
        #[serde(rename = "startOffset", default = "one", with = "dec_small_num")]
        start_offset: u64,
    },
    Subseries {
        inner: Box<SequenceSpec>,
        indices: IndexMap,
        #[serde(rename = "startOffset", default = "one", with = "dec_small_num")]
        start_offset: u64,
    },
}

/// `startOffset` is emitted as a JSON number, accepted as number or string.
mod dec_small_num {
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        crate::json::dec_small::deserialize(d)
    }
}

impl TryFrom<SpecRepr> for SequenceSpec {
    type Error = Error;

    fn try_from(r: SpecRepr) -> Result<Self> {
        let (family, start_offset) = match r {
            SpecRepr::Power { a1, e, start_offset } => (Family::PowerRecurrence { a1, e }, start_offset),
            SpecRepr::FactorialExp {
                base,
                offset,
                start_offset,
            } => (Family::FactorialExponent { base, offset }, start_offset),
            SpecRepr::Explicit {
                terms,
                start_offset,
            } => (Family::Explicit { terms }, start_offset),
            SpecRepr::Subseries {
                inner,
                indices,
                start_offset,
            } => (Family::Subseries { inner, indices }, start_offset),
        };
        SequenceSpec::new(family, start_offset)
    }
}

impl From<SequenceSpec> for SpecRepr {
    fn from(s: SequenceSpec) -> Self {
        let start_offset = s.start_offset;
        match s.family {
            Family::PowerRecurrence { a1, e } => SpecRepr::Power { a1, e, start_offset },
            Family::FactorialExponent { base, offset } => SpecRepr::FactorialExp {
                base,
                offset,
                start_offset,
            },
            Family::Explicit { terms } => SpecRepr::Explicit {
                terms,
                start_offset,
            },
            Family::Subseries { inner, indices } => SpecRepr::Subseries {
                inner,
                indices,
                start_offset,
            },
        }
    }
}

impl SequenceSpec {
    pub fn new(family: Family, start_offset: u64) -> Result<Self> {
        let spec = SequenceSpec {
            family,
            start_offset,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn power(a1: u64, e: u64) -> Result<Self> {
        Self::new(
            Family::PowerRecurrence {
                a1: BigUint::from(a1),
                e,
            },
            1,
        )
    }

    pub fn factorial_exp(base: u64, offset: u64) -> Result<Self> {
        Self::new(
            Family::FactorialExponent {
                base: BigUint::from(base),
                offset,
            },
            1,
        )
    }

    pub fn explicit<I: IntoIterator<Item = u64>>(terms: I) -> Result<Self> {
        Self::new(
            Family::Explicit {
                terms: terms.into_iter().map(BigUint::from).collect(),
            },
            1,
        )
    }

    pub fn with_start_offset(mut self, start_offset: u64) -> Result<Self> {
        self.start_offset = start_offset;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.start_offset == 0 {
            return Err(Error::InvalidParameter("startOffset must be >= 1".into()));
        }
        match &self.family {
            Family::PowerRecurrence { a1, e } => {
                if a1.is_zero() {
                    return Err(Error::InvalidParameter("a1 must be positive".into()));
                }
                if *e < 2 {
                    return Err(Error::InvalidParameter("power exponent e must be >= 2".into()));
                }
            }
            Family::FactorialExponent { base, .. } => {
                if *base < BigUint::from(2u8) {
                    return Err(Error::InvalidParameter("factorial base must be >= 2".into()));
                }
            }
            Family::Explicit { terms } => {
                if terms.iter().any(Zero::is_zero) {
                    return Err(Error::InvalidParameter("explicit terms must be positive".into()));
                }
            }
            Family::Subseries { inner, indices } => {
                inner.validate()?;
                indices.validate()?;
            }
        }
        if let Some(len) = self.raw_len() {
            if self.start_offset > len {
                return Err(Error::InvalidParameter(format!(
                    "startOffset {} exceeds the {len} defined terms",
                    self.start_offset
                )));
            }
        }
        Ok(())
    }

    /// Number of defined raw terms, `None` for infinite families.
    fn raw_len(&self) -> Option<u64> {
        match &self.family {
            Family::PowerRecurrence { .. } | Family::FactorialExponent { .. } => None,
            Family::Explicit { terms } => Some(terms.len() as u64),
            Family::Subseries { inner, indices } => {
                let inner_len = inner.term_count();
                match (indices, inner_len) {
                    (IndexMap::Explicit { indices }, Some(l)) => {
                        Some(indices.iter().take_while(|&&i| i <= l).count() as u64)
                    }
                    (IndexMap::Explicit { .. }, None) => indices.len(),
                    (IndexMap::Affine { s, t }, Some(l)) => {
                        // largest n with s·n + t <= l
                        let n = (l as i128 - *t as i128).div_euclid(*s as i128);
                        Some(n.max(0) as u64)
                    }
                    (IndexMap::Affine { .. }, None) => None,
                }
            }
        }
    }

    /// Number of defined terms of the shifted series, `None` when infinite.
    pub fn term_count(&self) -> Option<u64> {
        self.raw_len().map(|l| l + 1 - self.start_offset)
    }

    /// Whether `a_{n+1} >= 2·a_n` is guaranteed for every `n` by the family's structure.
    pub fn has_doubling_tail(&self) -> bool {
        match &self.family {
            // a_{n+1} = a_n^e >= a_n^2 >= 2·a_n once a_1 >= 2
            Family::PowerRecurrence { a1, e } => *a1 >= BigUint::from(2u8) && *e >= 2,
            // a_{n+1}/a_n = base^(n·n!) >= 2
            Family::FactorialExponent { base, .. } => *base >= BigUint::from(2u8),
            Family::Explicit { .. } => false,
            // c_{n+1} = a_{g(n+1)} >= a_{g(n)+1} >= 2·a_{g(n)}, needs an infinite index map
            Family::Subseries { inner, indices } => {
                matches!(indices, IndexMap::Affine { .. }) && inner.has_doubling_tail()
            }
        }
    }

    /// Stable hex SHA-256 of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let json = crate::json::to_canonical_string(self).unwrap_or_default();
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// Raw term `a_n` (ignoring `start_offset`).
fn raw_term(spec: &SequenceSpec, limits: &Limits, n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::IndexOutOfRange {
            n,
            len: spec.raw_len().unwrap_or(u64::MAX),
        });
    }
    match &spec.family {
        Family::PowerRecurrence { a1, e } => {
            let mut a = a1.clone();
            if a.is_one() {
                return Ok(a);
            }
            for _ in 1..n {
                limits.check_bits((a.bits() as u128).saturating_mul(*e as u128))?;
                a = Pow::pow(&a, *e);
            }
            Ok(a)
        }
        Family::FactorialExponent { base, offset } => {
            let exp = factorial(n)
                .and_then(|f| f.checked_add(*offset))
                .ok_or(Error::Overflow {
                    needed: u64::MAX,
                    budget: limits.digit_budget,
                })?;
            arith::checked_pow(base, exp, limits)
        }
        Family::Explicit { terms } => terms
            .get((n - 1) as usize)
            .cloned()
            .ok_or(Error::IndexOutOfRange {
                n,
                len: terms.len() as u64,
            }),
        Family::Subseries { inner, indices } => {
            let g = indices.apply(n)?;
            term_of(inner, limits, g)
        }
    }
}

fn factorial(n: u64) -> Option<u64> {
    (1..=n).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

fn term_of(spec: &SequenceSpec, limits: &Limits, n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::IndexOutOfRange {
            n,
            len: spec.term_count().unwrap_or(u64::MAX),
        });
    }
    raw_term(spec, limits, n + spec.start_offset - 1)
}

/// A validated sequence paired with the resource limits used to evaluate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    spec: SequenceSpec,
    limits: Limits,
}

impl Series {
    pub fn new(spec: SequenceSpec, limits: Limits) -> Self {
        Series { spec, limits }
    }

    pub fn with_defaults(spec: SequenceSpec) -> Self {
        Self::new(spec, Limits::default())
    }

    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// Term `n` (1-based) of the shifted series.
    pub fn term(&self, n: u64) -> Result<BigUint> {
        term_of(&self.spec, &self.limits, n)
    }

    /// Terms `1..=to` of the shifted series, computed in one pass where the family allows it.
    pub fn terms(&self, to: u64) -> Result<Vec<BigUint>> {
        if let Family::PowerRecurrence { e, .. } = &self.spec.family {
            let first = self.term(1)?;
            let mut out = Vec::with_capacity(to as usize);
            if to >= 1 {
                out.push(first);
            }
            for n in 2..=to {
                let prev = &out[(n - 2) as usize];
                let bits = (prev.bits() as u128).saturating_mul(*e as u128);
                self.limits.check_bits(bits)?;
                let next = Pow::pow(prev, *e);
                out.push(next);
            }
            return Ok(out);
        }
        (1..=to).map(|n| self.term(n)).collect()
    }

    /// Sum of the terms skipped by `start_offset`: `Σ_{n < start_offset} 1/a_n`.
    pub fn rational_prefix(&self) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for n in 1..self.spec.start_offset {
            let a = raw_term(&self.spec, &self.limits, n)?;
            acc += big_rational(BigUint::one(), a);
        }
        Ok(acc)
    }
}

/// Inclusive, non-empty index window `from..=to` with `from >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub from: u64,
    pub to: u64,
}

impl Window {
    pub fn new(from: u64, to: u64) -> Result<Self> {
        if from == 0 || to < from {
            return Err(Error::InvalidParameter(format!(
                "window {from}..={to} must be non-empty and start at >= 1"
            )));
        }
        Ok(Window { from, to })
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<u64> {
        self.from..=self.to
    }

    pub fn count(&self) -> u64 {
        self.to - self.from + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IndexCheck {
    pub n: u64,
    pub lower_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub upper_holds: Option<bool>,
}

impl IndexCheck {
    pub fn all_hold(&self) -> bool {
        self.lower_holds && self.upper_holds.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GrowthReport {
    pub alpha: RationalExponent,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<RationalExponent>,
    pub window: Window,
    pub per_index: Vec<IndexCheck>,
    pub first_all_hold_from: Option<u64>,
}

impl GrowthReport {
    fn new(
        alpha: RationalExponent,
        k: Option<RationalExponent>,
        window: Window,
        per_index: Vec<IndexCheck>,
    ) -> Self {
        let mut first = None;
        for c in per_index.iter().rev() {
            if c.all_hold() {
                first = Some(c.n);
            } else {
                break;
            }
        }
        GrowthReport {
            alpha,
            k,
            window,
            per_index,
            first_all_hold_from: first,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.per_index.iter().all(IndexCheck::all_hold)
    }

    /// First index where some check fails.
    pub fn first_failure(&self) -> Option<u64> {
        self.per_index.iter().find(|c| !c.all_hold()).map(|c| c.n)
    }
}

/// Strict growth `a_{n+1} > a_n^{α+1}` at every `n` in the window.
pub fn check_growth(series: &Series, alpha: &RationalExponent, window: Window) -> Result<GrowthReport> {
    let alpha1 = alpha.add_int(1)?;
    let terms = series.terms(window.to + 1)?;
    let limits = series.limits();
    let mut per_index = Vec::with_capacity(window.count() as usize);
    for n in window.iter() {
        let a = &terms[(n - 1) as usize];
        let next = &terms[n as usize];
        let lower = compare_power(next, a, &alpha1, limits)? == Ordering::Greater;
        per_index.push(IndexCheck {
            n,
            lower_holds: lower,
            upper_holds: None,
        });
    }
    Ok(GrowthReport::new(*alpha, None, window, per_index))
}

/// Two-sided hypothesis `a_n^{α+1} <= a_{n+1} < a_n^{kα}`.
pub fn check_sandwich(
    series: &Series,
    alpha: &RationalExponent,
    k: &RationalExponent,
    window: Window,
) -> Result<GrowthReport> {
    if k.cmp_int(1) != Ordering::Greater {
        return Err(Error::InvalidParameter(format!("k = {k} must be > 1")));
    }
    let alpha1 = alpha.add_int(1)?;
    let k_alpha = k.mul(alpha)?;
    let terms = series.terms(window.to + 1)?;
    let limits = series.limits();
    let mut per_index = Vec::with_capacity(window.count() as usize);
    for n in window.iter() {
        let a = &terms[(n - 1) as usize];
        let next = &terms[n as usize];
        let lower = compare_power(next, a, &alpha1, limits)? != Ordering::Less;
        let upper = compare_power(next, a, &k_alpha, limits)? == Ordering::Less;
        per_index.push(IndexCheck {
            n,
            lower_holds: lower,
            upper_holds: Some(upper),
        });
    }
    Ok(GrowthReport::new(*alpha, Some(*k), window, per_index))
}

/// Subseries `c_n = a_{g(n)}` of `spec`.
pub fn subseries(spec: &SequenceSpec, g: IndexMap) -> Result<SequenceSpec> {
    g.validate()?;
    SequenceSpec::new(
        Family::Subseries {
            inner: Box::new(spec.clone()),
            indices: g,
        },
        1,
    )
}
