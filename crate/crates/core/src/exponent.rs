use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent `p ∈ (0, ∞]`. Serialized as a number, or as `"inf"` for `p = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 {
            Ok(Self::Finite(p))
        } else if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else {
            Err(Error::InvalidInput(format!("exponent must lie in (0, inf], got {p}")))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    /// `p` as an `f64`, with `∞` for the sup norm.
    pub fn value(&self) -> f64 {
        match self {
            Self::Finite(p) => *p,
            Self::Infinity => f64::INFINITY,
        }
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn reciprocal(&self) -> f64 {
        match self {
            Self::Finite(p) => 1.0 / p,
            Self::Infinity => 0.0,
        }
    }

    /// `p̃ = min(1, p)`.
    pub fn tilde(&self) -> f64 {
        self.value().min(1.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Inf" => Ok(Self::Infinity),
            other => Self::finite(
                other.parse::<f64>().map_err(|_| Error::Config(format!("bad exponent `{other}`")))?,
            ),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(p) => s.serialize_f64(*p),
            Self::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::finite(p).map_err(serde::de::Error::custom),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_serialize() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("0.5".parse::<Exponent>().unwrap(), Exponent::Finite(0.5));
        assert!("0".parse::<Exponent>().is_err());
        assert!("-1".parse::<Exponent>().is_err());
        assert_eq!(serde_json::to_string(&Exponent::Infinity).unwrap(), "\"inf\"");
        let p: Exponent = serde_json::from_str("2.0").unwrap();
        assert_eq!(p, Exponent::Finite(2.0));
        assert_eq!(Exponent::Finite(3.0).tilde(), 1.0);
        assert_eq!(Exponent::Finite(0.25).tilde(), 0.25);
    }
}
