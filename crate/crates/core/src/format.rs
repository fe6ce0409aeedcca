//! Text and JSON encodings: rationals as `"p/q"` strings, the algebra file
//! format, and functional vectors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{Scalar, Vector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarParseError {
    Syntax(String),
    ZeroDenominator(String),
    NotReduced(String),
}

impl fmt::Display for ScalarParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarParseError::Syntax(s) => write!(f, "not a rational: {s:?}"),
            ScalarParseError::ZeroDenominator(s) => write!(f, "zero denominator: {s:?}"),
            ScalarParseError::NotReduced(s) => write!(f, "rational not in lowest terms: {s:?}"),
        }
    }
}

/// Strict parse of `"p"` or `"p/q"` with `q > 0` and `gcd(p, q) = 1`.
pub fn parse_scalar(s: &str) -> std::result::Result<Scalar, ScalarParseError> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let syntax = || ScalarParseError::Syntax(s.to_string());
    let n = BigInt::from_str(num).map_err(|_| syntax())?;
    let Some(d) = den else {
        return Ok(Scalar::from_integer(n));
    };
    let d = BigInt::from_str(d).map_err(|_| syntax())?;
    if d.is_zero() {
        return Err(ScalarParseError::ZeroDenominator(s.to_string()));
    }
    if d < BigInt::zero() || !n.gcd(&d).is_one() {
        return Err(ScalarParseError::NotReduced(s.to_string()));
    }
    Ok(Scalar::new_raw(n, d))
}

/// Lenient parse used for user-supplied functionals: any nonzero
/// denominator is accepted and the value is reduced.
pub fn parse_scalar_lenient(s: &str) -> Result<Scalar> {
    match parse_scalar(s) {
        Ok(x) => Ok(x),
        Err(ScalarParseError::NotReduced(_)) => {
            let (n, d) = s.trim().split_once('/').expect("denominator present");
            let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(e.to_string()))?;
            let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(Scalar::new(n, d))
        }
        Err(e) => Err(Error::Parse(e.to_string())),
    }
}

pub fn scalar_string(x: &Scalar) -> String {
    x.to_string()
}

/// Parses a functional given either as a JSON array of rational strings
/// or as a comma-separated list.
pub fn parse_vector(s: &str) -> Result<Vector> {
    let t = s.trim();
    let items: Vec<String> = if t.starts_with('[') {
        let raw: Vec<serde_json::Value> =
            serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_iter()
            .map(|v| match v {
                serde_json::Value::String(s) => Ok(s),
                serde_json::Value::Number(n) => Ok(n.to_string()),
                other => Err(Error::Parse(format!("unexpected entry {other}"))),
            })
            .collect::<Result<_>>()?
    } else if t.is_empty() {
        Vec::new()
    } else {
        t.split(',').map(|x| x.trim().to_string()).collect()
    };
    items.iter().map(|x| parse_scalar_lenient(x)).collect()
}

pub fn vector_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(scalar_string).collect()
}

/// Serde adapter for a single scalar.
pub mod scalar_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&scalar_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_scalar_lenient(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of scalars.
pub mod vector_strings {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
        super::vector_strings(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vector, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|x| parse_scalar_lenient(x).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for a matrix of scalars.
pub mod matrix_strings {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vector], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m.iter().map(|r| super::vector_strings(r)).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vector>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|r| {
                r.iter()
                    .map(|x| parse_scalar_lenient(x).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Ordered `{"k": "p/q"}` map; keeps entry order on both read and write.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coeffs(pub Vec<(String, String)>);

impl Serialize for Coeffs {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Coeffs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct CoeffsVisitor;
        impl<'de> Visitor<'de> for CoeffsVisitor {
            type Value = Coeffs;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from 1-based indices to rational strings")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Coeffs, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, String>()? {
                    out.push((k, v));
                }
                Ok(Coeffs(out))
            }
        }
        d.deserialize_map(CoeffsVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Coeffs,
}

/// Raw on-disk algebra document. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketEntry>,
}

impl AlgebraFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical pretty-printed encoding, newline terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("algebra file serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_parsing() {
        assert_eq!(parse_scalar("3/4").unwrap().to_string(), "3/4");
        assert_eq!(parse_scalar("-5").unwrap().to_string(), "-5");
        assert!(matches!(parse_scalar("1/0"), Err(ScalarParseError::ZeroDenominator(_))));
        assert!(matches!(parse_scalar("2/4"), Err(ScalarParseError::NotReduced(_))));
        assert!(matches!(parse_scalar("x"), Err(ScalarParseError::Syntax(_))));
        assert_eq!(parse_scalar_lenient("2/4").unwrap().to_string(), "1/2");
    }

    #[test]
    fn vector_parsing() {
        let a = parse_vector(r#"["1", "-1/2", "0"]"#).unwrap();
        let b = parse_vector("1,-1/2,0").unwrap();
        assert_eq!(a, b);
        assert_eq!(vector_strings(&a), vec!["1", "-1/2", "0"]);
    }

    #[test]
    fn coeff_order_preserved() {
        let s = r#"{"dim":3,"basis":["Z","X","Y"],"brackets":[{"i":2,"j":3,"coeffs":{"1":"1"}}]}"#;
        let f = AlgebraFile::from_json(s).unwrap();
        assert_eq!(f.brackets[0].coeffs.0, vec![("1".to_string(), "1".to_string())]);
        let again = AlgebraFile::from_json(&f.to_json()).unwrap();
        assert_eq!(again, f);
    }
}
