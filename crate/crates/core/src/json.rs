//! Wire helpers: every big integer travels as a decimal string.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::RationalExponent;
use crate::error::{Error, Result};

/// `{"num": "...", "den": "..."}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl From<&RationalExponent> for RationalJson {
    fn from(e: &RationalExponent) -> Self {
        RationalJson {
            num: e.num().to_string(),
            den: e.den().to_string(),
        }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Result<BigRational> {
        let num: BigInt = self
            .num
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator {:?}", self.num)))?;
        let den: BigInt = self
            .den
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator {:?}", self.den)))?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    }

    pub fn to_exponent(&self) -> Result<RationalExponent> {
        format!("{}/{}", self.num, self.den).parse()
    }
}

pub mod dec_nat {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let raw = super::Flex::deserialize(d)?;
        raw.text()
            .parse()
            .map_err(|_| D::Error::custom(format!("expected a decimal natural, got {:?}", raw.text())))
    }
}

pub mod dec_nat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigUint>, D::Error> {
        Vec::<super::Flex>::deserialize(d)?
            .into_iter()
            .map(|f| {
                f.text()
                    .parse()
                    .map_err(|_| D::Error::custom(format!("expected a decimal natural, got {:?}", f.text())))
            })
            .collect()
    }
}

/// Small integers accepted either as JSON numbers or decimal strings; emitted as strings.
pub mod dec_small {
    use super::*;
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<T, D::Error> {
        let raw = super::Flex::deserialize(d)?;
        raw.text()
            .parse()
            .map_err(|_| D::Error::custom(format!("expected an integer, got {:?}", raw.text())))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Flex {
    Str(String),
    Num(serde_json::Number),
}

impl Flex {
    fn text(&self) -> String {
        match self {
            Flex::Str(s) => s.trim().to_string(),
            Flex::Num(n) => n.to_string(),
        }
    }
}

/// Canonical serialization: sorted keys, two-space indentation, trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

impl Serialize for RationalExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RationalJson::deserialize(d)?
            .to_exponent()
            .map_err(D::Error::custom)
    }
}

/// Serde adapter for `BigRational` fields in the `{"num","den"}` shape.
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalJson::from(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        RationalJson::deserialize(d)?
            .to_rational()
            .map_err(D::Error::custom)
    }
}
