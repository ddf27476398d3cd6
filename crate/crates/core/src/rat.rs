//! Small helpers around arbitrary-precision rationals: parsing, printing and
//! serde adapters that encode rationals as `"p/q"` strings.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Exact rational used throughout the crate.
pub type Q = BigRational;

/// Integer shorthand.
pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Rational from an integer.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational `n/d`; panics on a zero denominator.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || fp.is_empty() {
            return Err(err());
        }
        let whole: BigInt = if ip_abs.is_empty() {
            BigInt::zero()
        } else {
            ip_abs.parse().map_err(|_| err())?
        };
        let frac: BigInt = fp.parse().map_err(|_| err())?;
        let scale = num::pow(BigInt::from(10), fp.len());
        let mag = Q::new(whole * &scale + frac, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Q::from_integer(n))
}

/// Canonical text form: `"p"` for integers, otherwise `"p/q"`.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Lossy conversion; exact rationals of moderate size convert faithfully.
pub fn to_f64(x: &Q) -> f64 {
    if let Some(v) = x.to_f64() {
        return v;
    }
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact rational from a finite double.
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

pub fn floor_int(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Accepts either a JSON string (`"p/q"`) or a JSON number.
#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Text(String),
    Int(i64),
    Float(f64),
}

fn repr_to_q<E: de::Error>(r: RatRepr) -> Result<Q, E> {
    match r {
        RatRepr::Text(s) => parse_rational(&s).map_err(E::custom),
        RatRepr::Int(i) => Ok(q(i)),
        RatRepr::Float(f) => from_f64(f).ok_or_else(|| E::custom("non-finite number")),
    }
}

/// Serde adapter for a single rational.
pub mod serde_q {
    use super::*;
    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        repr_to_q(RatRepr::deserialize(d)?)
    }
}

/// Serde adapter for a rational 2-vector.
pub mod serde_q2 {
    use super::*;
    pub fn serialize<S: Serializer>(x: &[Q; 2], s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&x[0]), format_rational(&x[1])].serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Q; 2], D::Error> {
        let [a, b] = <[RatRepr; 2]>::deserialize(d)?;
        Ok([repr_to_q(a)?, repr_to_q(b)?])
    }
}

/// Serde adapter for a list of rational pairs (table knots).
pub mod serde_q2_list {
    use super::*;
    pub fn serialize<S: Serializer>(x: &[[Q; 2]], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<[String; 2]> = x
            .iter()
            .map(|p| [format_rational(&p[0]), format_rational(&p[1])])
            .collect();
        v.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<[Q; 2]>, D::Error> {
        let raw = Vec::<[RatRepr; 2]>::deserialize(d)?;
        raw.into_iter()
            .map(|[a, b]| Ok([repr_to_q(a)?, repr_to_q(b)?]))
            .collect()
    }
}

/// Serde adapter writing integers as JSON numbers when they fit in an `i64`.
pub mod serde_bigint {
    use super::*;
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum IntRepr {
        Num(i64),
        Text(String),
    }
    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match IntRepr::deserialize(d)? {
            IntRepr::Num(n) => Ok(BigInt::from(n)),
            IntRepr::Text(t) => t.trim().parse().map_err(de::Error::custom),
        }
    }
}

/// Serde adapter for a real parameter given as a JSON number or a `"p/q"` string.
pub mod serde_real {
    use super::*;
    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(*x)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match RatRepr::deserialize(d)? {
            RatRepr::Float(f) => Ok(f),
            other => repr_to_q::<D::Error>(other).map(|v| to_f64(&v)),
        }
    }
}

/// Display wrapper printing a rational in canonical form.
pub struct DisplayQ<'a>(pub &'a Q);

impl fmt::Display for DisplayQ<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}
