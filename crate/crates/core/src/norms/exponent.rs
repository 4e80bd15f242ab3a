use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::NormError;

/// An exponent `p` in `[1, +inf]`.
///
/// Infinity is a tag, never a large float, so that conjugation is exact at
/// both ends of the range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    pub fn new(p: f64) -> Result<Self, NormError> {
        if p.is_nan() || p < 1.0 {
            return Err(NormError::InvalidExponent(p));
        }
        if p == f64::INFINITY {
            Ok(Exponent::Infinite)
        } else {
            Ok(Exponent::Finite(p))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    /// The exponent as a float, `f64::INFINITY` for the tagged value.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// `1/p`, with `1/inf = 0`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinite => 0.0,
        }
    }

    /// The conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinite => Exponent::ONE,
            Exponent::Finite(1.0) => Exponent::Infinite,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(p) => Exponent::new(p).map_err(de::Error::custom),
            Repr::Text(s) if s == "inf" || s == "infinity" => Ok(Exponent::Infinite),
            Repr::Text(s) => Err(de::Error::custom(format!("bad exponent {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_endpoints_are_exact() {
        assert_eq!(Exponent::ONE.conjugate(), Exponent::Infinite);
        assert_eq!(Exponent::Infinite.conjugate(), Exponent::ONE);
        assert_eq!(Exponent::TWO.conjugate(), Exponent::TWO);
        assert_eq!(Exponent::Finite(1.5).conjugate(), Exponent::Finite(3.0));
    }

    #[test]
    fn rejects_below_one_and_nan() {
        assert!(Exponent::new(0.999).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert_eq!(Exponent::new(f64::INFINITY).unwrap(), Exponent::Infinite);
    }

    #[test]
    fn serde_uses_inf_tag() {
        let s = serde_json::to_string(&Exponent::Infinite).unwrap();
        assert_eq!(s, "\"inf\"");
        let p: Exponent = serde_json::from_str("1.5").unwrap();
        assert_eq!(p, Exponent::Finite(1.5));
        assert!(serde_json::from_str::<Exponent>("0.5").is_err());
    }
}
