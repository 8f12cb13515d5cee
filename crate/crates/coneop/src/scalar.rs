//! Scalar values shared by both space models: exact rationals on discrete
//! spaces, `f64` on the piecewise-linear line.
//!
//! Discrete-model quantities (function values, norms, discrepancies) are
//! `Rational` so that equalities are decidable with no tolerance; the PL
//! model uses `Real` with a caller-supplied comparison tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::ConeError;

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Real(f64),
}

impl Scalar {
    pub fn zero_rational() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn zero_real() -> Self {
        Scalar::Real(0.0)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Real(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Real(x) => *x < 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Real(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Real(_) => None,
        }
    }

    /// |self - other|. Both operands must live in the same model.
    pub fn abs_diff(&self, other: &Scalar) -> Result<Scalar, ConeError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => {
                Ok(Scalar::Rational((a - b).abs()))
            }
            (Scalar::Real(a), Scalar::Real(b)) => Ok(Scalar::Real((a - b).abs())),
            _ => Err(ConeError::KindMismatch),
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, ConeError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Real(a), Scalar::Real(b)) => Ok(Scalar::Real(a + b)),
            _ => Err(ConeError::KindMismatch),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, ConeError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Real(a), Scalar::Real(b)) => Ok(Scalar::Real(a * b)),
            _ => Err(ConeError::KindMismatch),
        }
    }

    pub fn le(&self, other: &Scalar) -> Result<bool, ConeError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(a <= b),
            (Scalar::Real(a), Scalar::Real(b)) => Ok(a <= b),
            _ => Err(ConeError::KindMismatch),
        }
    }

    pub fn max(self, other: Scalar) -> Result<Scalar, ConeError> {
        Ok(if other.le(&self)? { self } else { other })
    }

    /// Compares against a tolerance given as `f64`. Rationals compare
    /// exactly against the (exact binary) rational value of `tol`, so
    /// `tol = 0.0` means exact equality to zero.
    pub fn within_tol(&self, tol: f64) -> bool {
        match self {
            Scalar::Rational(r) => {
                let t = BigRational::from_float(tol).unwrap_or_else(BigRational::zero);
                r.abs() <= t
            }
            Scalar::Real(x) => x.abs() <= tol,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", rational_to_string(r)),
            Scalar::Real(x) => write!(f, "{x}"),
        }
    }
}

/// Renders a rational as `"p/q"`, or plain `"p"` when the denominator is 1.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"` or a plain integer string.
pub fn rational_from_str(s: &str) -> Result<BigRational, ConeError> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| ConeError::BadRational(s.to_string()))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(ConeError::BadRational(s.to_string()));
            }
            Ok(BigRational::new(parse_int(p)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(r) => serializer.serialize_str(&rational_to_string(r)),
            Scalar::Real(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        match v {
            serde_json::Value::String(s) => rational_from_str(&s)
                .map(Scalar::Rational)
                .map_err(|e| D::Error::custom(e.to_string())),
            serde_json::Value::Number(n) => {
                let x = n.as_f64().ok_or_else(|| D::Error::custom("bad number"))?;
                Ok(Scalar::Real(x))
            }
            _ => Err(D::Error::custom("expected number or \"p/q\" string")),
        }
    }
}

/// Serde adapter for `Vec<BigRational>` fields: emits `"p/q"` strings and
/// accepts strings, integers, or floats (floats convert by their exact
/// binary expansion).
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(
        values: &[BigRational],
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = values.iter().map(rational_to_string).collect();
        strings.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(deserializer)?;
        raw.into_iter().map(|v| parse_value::<D>(&v)).collect()
    }

    fn parse_value<'de, D: Deserializer<'de>>(
        v: &serde_json::Value,
    ) -> Result<BigRational, D::Error> {
        match v {
            serde_json::Value::String(s) => {
                rational_from_str(s).map_err(|e| D::Error::custom(e.to_string()))
            }
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(BigRational::from_integer(BigInt::from(i)))
                } else if let Some(x) = n.as_f64() {
                    BigRational::from_float(x)
                        .ok_or_else(|| D::Error::custom("non-finite number"))
                } else {
                    Err(D::Error::custom("bad number"))
                }
            }
            _ => Err(D::Error::custom("expected number or \"p/q\" string")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_round_trip() {
        let r = BigRational::new(BigInt::from(-3), BigInt::from(6));
        let s = rational_to_string(&r);
        assert_eq!(s, "-1/2");
        assert_eq!(rational_from_str(&s).unwrap(), r);
        assert_eq!(rational_from_str("7").unwrap(), BigRational::from_integer(7.into()));
    }

    #[test]
    fn zero_tolerance_is_exact() {
        let tiny = Scalar::Rational(BigRational::new(BigInt::from(1), BigInt::from(1_000_000_000)));
        assert!(!tiny.within_tol(0.0));
        assert!(Scalar::zero_rational().within_tol(0.0));
    }

    #[test]
    fn division_by_zero_denominator_rejected() {
        assert!(rational_from_str("1/0").is_err());
    }
}
