//! Exact verification of transcendence criteria for series `θ = Σ 1/a_n`
//! of unit fractions with rapidly growing integer terms.
//!
//! All decisions are made with exact big-integer comparisons; floating point
//! appears only in advisory report columns.

pub mod arith;
pub mod cli;
pub mod convergents;
pub mod enclosure;
pub mod error;
pub mod json;
pub mod measure;
pub mod roth;
pub mod sequence;

pub use arith::{compare_power, Limits, RationalExponent};
pub use error::{Error, Result};
pub use sequence::{
    check_growth, check_sandwich, subseries, Family, GrowthReport, IndexCheck, IndexMap,
    SequenceSpec, Series, Window,
};
pub use convergents::{
    convergents, denominator_bound_holds, effective_start, partial_sum, shrink_factor,
    shrink_less_than, Convergent, TailShrink,
};
pub use enclosure::{enclose, refine, tail_bound, Enclosure};
pub use measure::{
    abs_lower_bound, bound, brute_force_min, find_n1, q_growth_holds, qn_exponent_bound_holds,
    verify_measure, MeasureBound, MeasureEvidence, N1Result, PolynomialInt, SearchResult,
};
pub use roth::{certify, witness, Certificate, Witness};
