//! Schatten norm orders: a real `p >= 1` or infinity.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Order of a Schatten norm. Finite orders are real numbers `>= 1`;
/// [`NormOrder::Infinity`] denotes the operator norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormOrder {
    Finite(f64),
    Infinity,
}

impl NormOrder {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 1.0 {
            return Err(Error::InvalidNormOrder { value });
        }
        Ok(NormOrder::Finite(value))
    }

    pub fn one() -> Self {
        NormOrder::Finite(1.0)
    }

    pub fn infinity() -> Self {
        NormOrder::Infinity
    }

    /// The order as a float; infinity maps to `f64::INFINITY`.
    pub fn value(&self) -> f64 {
        match self {
            NormOrder::Finite(v) => *v,
            NormOrder::Infinity => f64::INFINITY,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, NormOrder::Finite(v) if *v == 1.0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, NormOrder::Infinity)
    }

    /// `Some(k)` when the order is a whole number small enough for `powi`.
    pub fn as_integer(&self) -> Option<u32> {
        match self {
            NormOrder::Finite(v) if v.fract() == 0.0 && *v <= u32::MAX as f64 => Some(*v as u32),
            _ => None,
        }
    }

    /// Natural orders are the whole numbers `1, 2, 3, ...`.
    pub fn is_natural(&self) -> bool {
        self.as_integer().is_some()
    }
}

impl fmt::Display for NormOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormOrder::Finite(v) => write!(f, "{v}"),
            NormOrder::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for NormOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(NormOrder::Infinity);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Invalid(format!("cannot parse norm order {t:?}")))?;
        NormOrder::new(v)
    }
}

impl Serialize for NormOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NormOrder::Finite(v) => s.serialize_f64(*v),
            NormOrder::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for NormOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;

        impl Visitor<'_> for V {
            type Value = NormOrder;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number >= 1 or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<NormOrder, E> {
                NormOrder::new(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<NormOrder, E> {
                NormOrder::new(v as f64).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<NormOrder, E> {
                NormOrder::new(v as f64).map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<NormOrder, E> {
                v.parse().map_err(E::custom)
            }
        }

        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_orders_at_least_one() {
        assert!(NormOrder::new(1.0).is_ok());
        assert!(NormOrder::new(2.5).is_ok());
        assert!(NormOrder::new(0.99).is_err());
        assert!(NormOrder::new(f64::NAN).is_err());
        assert!(NormOrder::new(f64::INFINITY).is_err());
    }

    #[test]
    fn integer_detection() {
        assert_eq!(NormOrder::new(3.0).unwrap().as_integer(), Some(3));
        assert_eq!(NormOrder::new(2.5).unwrap().as_integer(), None);
        assert_eq!(NormOrder::Infinity.as_integer(), None);
    }

    #[test]
    fn parses_and_displays() {
        assert_eq!("inf".parse::<NormOrder>().unwrap(), NormOrder::Infinity);
        assert_eq!("2".parse::<NormOrder>().unwrap(), NormOrder::Finite(2.0));
        assert_eq!(NormOrder::Infinity.to_string(), "inf");
        assert_eq!(NormOrder::Finite(2.0).to_string(), "2");
        assert!("0.5".parse::<NormOrder>().is_err());
    }
}
