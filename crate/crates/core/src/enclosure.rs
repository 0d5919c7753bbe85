//! Rigorous rational enclosures `[θ_M, θ_M + 2/a_{M+1}]` of the series value.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::big_rational;
use crate::convergents::partial_sum;
use crate::error::{Error, Result};
use crate::json::rational;
use crate::sequence::Series;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    pub m: u64,
    #[serde(with = "rational")]
    pub lo: BigRational,
    #[serde(with = "rational")]
    pub hi: BigRational,
    pub fingerprint: String,
}

impl Enclosure {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `self ⊆ outer`
    pub fn is_within(&self, outer: &Enclosure) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }

    /// Intersection of two valid enclosures of the same series.
    pub fn intersect(&self, other: &Enclosure) -> Result<Enclosure> {
        if self.fingerprint != other.fingerprint {
            return Err(Error::SpecMismatch);
        }
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo > hi {
            return Err(Error::Internal("disjoint enclosures of one value".into()));
        }
        Ok(Enclosure {
            m: self.m.max(other.m),
            lo,
            hi,
            fingerprint: self.fingerprint.clone(),
        })
    }
}

/// `2/a_{m+1}`, an upper bound on `Σ_{n>m} 1/a_n` whenever `a_{n+1} >= 2·a_n` for all `n > m`.
pub fn tail_bound(series: &Series, m: u64) -> Result<BigRational> {
    if !series.spec().has_doubling_tail() {
        return Err(Error::NoTailGuarantee);
    }
    let next = series.term(m + 1)?;
    Ok(big_rational(BigUint::from(2u8), next))
}

pub fn enclose(series: &Series, m: u64) -> Result<Enclosure> {
    let tail = tail_bound(series, m)?;
    let lo = partial_sum(series, m)?.value();
    let hi = &lo + tail;
    Ok(Enclosure {
        m,
        lo,
        hi,
        fingerprint: series.spec().fingerprint(),
    })
}

/// The enclosure one term deeper.
pub fn refine(series: &Series, enc: &Enclosure) -> Result<Enclosure> {
    if enc.fingerprint != series.spec().fingerprint() {
        return Err(Error::SpecMismatch);
    }
    enclose(series, enc.m + 1)
}
