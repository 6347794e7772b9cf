//! JSON-safe wrappers for exact integers and rationals.
//!
//! Certificates carry values like 2^1023 that do not survive JSON number
//! precision, so every exact quantity is serialized as a decimal string
//! (rationals as `"p/q"`).

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact natural number, serialized as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactNat(pub BigUint);

impl ExactNat {
    pub fn from_u64(v: u64) -> Self {
        ExactNat(BigUint::from(v))
    }
}

impl fmt::Display for ExactNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<BigUint> for ExactNat {
    fn from(v: BigUint) -> Self {
        ExactNat(v)
    }
}

impl Serialize for ExactNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        let v = BigUint::from_str(&raw)
            .map_err(|_| D::Error::custom(format!("not a decimal natural: {raw:?}")))?;
        Ok(ExactNat(v))
    }
}

/// An exact rational, serialized as `"p/q"` in lowest terms (`"p"` when q = 1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRat(pub BigRational);

impl ExactRat {
    pub fn from_int(v: i64) -> Self {
        ExactRat(BigRational::from_integer(BigInt::from(v)))
    }
}

impl fmt::Display for ExactRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom() == &BigInt::from(1) {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl From<BigRational> for ExactRat {
    fn from(v: BigRational) -> Self {
        ExactRat(v)
    }
}

impl Serialize for ExactRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        let parse = |txt: &str| BigInt::from_str(txt).ok();
        let v = match raw.split_once('/') {
            Some((p, q)) => {
                let p = parse(p).ok_or_else(|| D::Error::custom("bad numerator"))?;
                let q = parse(q).ok_or_else(|| D::Error::custom("bad denominator"))?;
                if q == BigInt::from(0) {
                    return Err(D::Error::custom("zero denominator"));
                }
                BigRational::new(p, q)
            }
            None => {
                let p = parse(&raw)
                    .ok_or_else(|| D::Error::custom(format!("not a rational: {raw:?}")))?;
                BigRational::from_integer(p)
            }
        };
        Ok(ExactRat(v))
    }
}
