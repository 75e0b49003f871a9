//! Exact rationals and their `"num/den"` text form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serializer};

use crate::error::{BggError, Result};

/// Exact rational scalar used everywhere in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// Integer value of `x` if it is an integer that fits in `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Canonical `"num/den"` rendering (denominator always present and positive).
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Short rendering for plain-text output: integers without a denominator.
pub fn display_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"n"`, `"n/d"`, with optional sign on the numerator. Whitespace
/// around the tokens is rejected so the text form stays canonical-ish.
pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || BggError::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(num).ok_or_else(bad)?;
    let den = match den {
        Some(d) => {
            if d.starts_with(['-', '+']) {
                return Err(bad());
            }
            parse_int(d).ok_or_else(bad)?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(BggError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(num, den))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    // Cap the length so hostile input cannot allocate without bound.
    if digits.is_empty() || digits.len() > 256 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses a comma separated list of rationals, e.g. `"1,-1/2,0"`.
pub fn parse_q_list(s: &str) -> Result<Vec<Q>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| parse_q(t.trim())).collect()
}

pub fn serialize_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_q(x))
}

pub fn deserialize_q<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
    let s = String::deserialize(d)?;
    parse_q(&s).map_err(de::Error::custom)
}

pub fn serialize_q_vec<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&format_q(x))?;
    }
    seq.end()
}

pub fn deserialize_q_vec<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
    let v = Vec::<String>::deserialize(d)?;
    v.iter().map(|s| parse_q(s).map_err(de::Error::custom)).collect()
}

/// Wrapper giving a rational the `"num/den"` serde form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QStr(pub Q);

impl fmt::Debug for QStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_q(&self.0))
    }
}

impl serde::Serialize for QStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_q(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for QStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        deserialize_q(d).map(QStr)
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3").unwrap(), q(3));
        assert_eq!(parse_q("-1/2").unwrap(), qf(-1, 2));
        assert_eq!(parse_q("4/6").unwrap(), qf(2, 3));
        assert_eq!(parse_q("+5").unwrap(), q(5));
        for bad in ["", "/", "1/", "/2", "1/0", "1/-2", "a", "1.5", " 1", "1//2", "--1"] {
            assert!(parse_q(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_q(&q(3)), "3/1");
        assert_eq!(format_q(&qf(-2, 4)), "-1/2");
        assert_eq!(display_q(&q(-7)), "-7");
        assert_eq!(display_q(&qf(1, 3)), "1/3");
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_q_list("1, -1/2,0").unwrap(), vec![q(1), qf(-1, 2), q(0)]);
        assert!(parse_q_list("").unwrap().is_empty());
        assert!(parse_q_list("1,,2").is_err());
    }

    proptest::proptest! {
        #[test]
        fn text_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
            let x = qf(n, d);
            proptest::prop_assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
        }
    }
}
