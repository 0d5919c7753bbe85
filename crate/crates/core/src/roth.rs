//! Witnesses `|θ - p_m/q_m| < q_m^{-α}` and window-bounded transcendence certificates.
//!
//! A certificate only ever covers a finite window. Roth's criterion needs
//! infinitely many witnesses, so the conclusion is conditional on the
//! growth pattern persisting beyond the window.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{compare_products, rational_parts, RationalExponent};
use crate::convergents::{convergents, Convergent};
use crate::enclosure::tail_bound;
use crate::error::{Error, Result};
use crate::json::{dec_nat, rational};
use crate::sequence::{check_growth, SequenceSpec, Series, Window};

pub const CERTIFICATE_VERSION: u32 = 1;

pub const CAVEAT: &str = "Finite verification: every listed witness satisfies the approximation \
inequality exactly, and the growth hypothesis holds on the listed window. Roth's criterion needs \
infinitely many such witnesses; transcendence follows only if the growth hypothesis holds for all n.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub m: u64,
    #[serde(with = "dec_nat")]
    pub p: BigUint,
    #[serde(with = "dec_nat")]
    pub q: BigUint,
    #[serde(with = "rational")]
    pub tail_bound: BigRational,
    pub verified: bool,
}

impl Witness {
    pub fn convergent(&self) -> Convergent {
        Convergent {
            m: self.m,
            p: self.p.clone(),
            q: self.q.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    #[serde(rename = "roth-criterion-satisfied-on-window")]
    RothCriterionSatisfiedOnWindow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub version: u32,
    pub spec: SequenceSpec,
    pub alpha: RationalExponent,
    pub start_offset: u64,
    #[serde(with = "rational")]
    pub rational_prefix: BigRational,
    pub witnesses: Vec<Witness>,
    pub conclusion: Conclusion,
    pub caveat: String,
}

impl Certificate {
    /// The `m` window covered by the witnesses.
    pub fn window(&self) -> Result<Window> {
        match (self.witnesses.first(), self.witnesses.last()) {
            (Some(a), Some(b)) => Window::new(a.m, b.m),
            _ => Err(Error::Parse("certificate has no witnesses".into())),
        }
    }
}

/// `tail < q^{-α}` with `α = p/s`, `tail = u/v`: `u^s · q^p < v^s`.
fn tail_beats(
    tail: &BigRational,
    q: &BigUint,
    alpha: &RationalExponent,
    series: &Series,
) -> Result<bool> {
    let (u, v) = rational_parts(tail)?;
    let (p, s) = (alpha.num(), alpha.den());
    Ok(compare_products(&[(&u, s), (q, p)], &[(&v, s)], series.limits())? == Ordering::Less)
}

fn make_witness(series: &Series, alpha: &RationalExponent, c: Convergent) -> Result<Witness> {
    let tail = tail_bound(series, c.m)?;
    let verified = tail_beats(&tail, &c.q, alpha, series)?;
    Ok(Witness {
        m: c.m,
        p: c.p,
        q: c.q,
        tail_bound: tail,
        verified,
    })
}

/// Witness at `m`; `verified` is false (not an error) when the inequality fails.
pub fn witness(series: &Series, alpha: &RationalExponent, m: u64) -> Result<Witness> {
    let c = crate::convergents::partial_sum(series, m)?;
    make_witness(series, alpha, c)
}

pub fn certify(series: &Series, alpha: &RationalExponent, m_range: Window) -> Result<Certificate> {
    if alpha.cmp_int(2) != Ordering::Greater {
        return Err(Error::AlphaTooSmall(alpha.to_string()));
    }
    let growth = check_growth(series, alpha, Window::new(1, m_range.to)?)?;
    if let Some(n) = growth.first_failure() {
        return Err(Error::HypothesisFailed { n });
    }

    let convs = convergents(series, m_range.to)?;
    let witnesses = convs
        .into_par_iter()
        .filter(|c| c.m >= m_range.from)
        .map(|c| make_witness(series, alpha, c))
        .collect::<Result<Vec<_>>>()?;

    if let Some(w) = witnesses.iter().find(|w| !w.verified) {
        return Err(Error::WitnessFailed { m: w.m });
    }
    for pair in witnesses.windows(2) {
        if pair[1].q <= pair[0].q || pair[1].tail_bound >= pair[0].tail_bound {
            return Err(Error::Internal(format!(
                "witness denominators/tails not monotone at m={}",
                pair[1].m
            )));
        }
    }

    Ok(Certificate {
        version: CERTIFICATE_VERSION,
        spec: series.spec().clone(),
        alpha: *alpha,
        start_offset: series.spec().start_offset,
        rational_prefix: series.rational_prefix()?,
        witnesses,
        conclusion: Conclusion::RothCriterionSatisfiedOnWindow,
        caveat: CAVEAT.to_string(),
    })
}

/// Recompute a certificate from its embedded inputs; `Ok(true)` iff it matches exactly.
pub fn revalidate(cert: &Certificate, limits: crate::Limits) -> Result<bool> {
    if cert.version != CERTIFICATE_VERSION {
        return Err(Error::Parse(format!("unsupported certificate version {}", cert.version)));
    }
    if cert.start_offset != cert.spec.start_offset {
        return Ok(false);
    }
    let series = Series::new(cert.spec.clone(), limits);
    let fresh = certify(&series, &cert.alpha, cert.window()?)?;
    Ok(&fresh == cert)
}
