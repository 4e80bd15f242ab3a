//! Exact rationals and their JSON form `{"num": .., "den": ..}`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"3/2"`, `"1.25"`, `"-7"` or `"2.5e-3"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], i32::from_str(&s[i + 1..]).ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all: String = format!("{whole}{frac}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all).ok()?);
    let scale = exp - frac.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= pow(&ten, scale as u32);
    } else {
        value /= pow(&ten, scale.unsigned_abs());
    }
    Some(if neg { -value } else { value })
}

fn pow(base: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * base)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter for a single rational.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q(pub Rational);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Text(String),
}

impl IntRepr {
    fn from_big(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Text(n.to_string()),
        }
    }

    fn into_big(self) -> Option<BigInt> {
        match self {
            IntRepr::Small(v) => Some(BigInt::from(v)),
            IntRepr::Text(s) => BigInt::from_str(&s).ok(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RatRepr {
    num: IntRepr,
    den: IntRepr,
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RatRepr {
            num: IntRepr::from_big(self.0.numer()),
            den: IntRepr::from_big(self.0.denom()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = RatRepr::deserialize(deserializer)?;
        let num = r
            .num
            .into_big()
            .ok_or_else(|| de::Error::custom("bad numerator"))?;
        let den = r
            .den
            .into_big()
            .ok_or_else(|| de::Error::custom("bad denominator"))?;
        if den.is_zero() || den.is_negative() {
            return Err(de::Error::custom("denominator must be positive"));
        }
        Ok(Q(BigRational::new(num, den)))
    }
}
