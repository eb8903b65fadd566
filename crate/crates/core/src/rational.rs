//! Exact rational numbers and their text form.
//!
//! Every value in this crate is a [`Rational`]: an arbitrary-precision,
//! always-normalized fraction. The text form is `"num/den"`, or just `"num"`
//! when the denominator is one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"a/b"`, `"a"` or `"-a/b"`. Surrounding whitespace is ignored.
pub fn parse(text: &str) -> Result<Rational, Error> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format(value: &Rational) -> String {
    value.to_string()
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(zero(), |acc, v| acc + v)
}

pub fn min(a: Rational, b: Rational) -> Rational {
    if b < a {
        b
    } else {
        a
    }
}

pub fn max(a: Rational, b: Rational) -> Rational {
    if b > a {
        b
    } else {
        a
    }
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

/// Greatest common divisor of a set of non-negative rationals: the largest
/// `g` such that every value is an integer multiple of `g`. Zero when all
/// values are zero.
pub fn gcd(values: &[Rational]) -> Rational {
    use num_integer::Integer;
    let mut lcm_den = BigInt::one();
    for v in values {
        lcm_den = lcm_den.lcm(v.denom());
    }
    let mut g = BigInt::zero();
    for v in values {
        let scaled = v.numer() * (&lcm_den / v.denom());
        g = g.gcd(&scaled);
    }
    Rational::new(g, lcm_den)
}

/// Serde adapter: a single rational as a `"num/den"` string.
pub mod text {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&super::format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let raw = Raw::deserialize(deserializer)?;
        raw.into_rational().map_err(de::Error::custom)
    }

    /// Accepts a string or a JSON integer.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum Raw {
        Int(i64),
        Text(String),
    }

    impl Raw {
        pub(crate) fn into_rational(self) -> Result<Rational, crate::Error> {
            match self {
                Raw::Int(i) => Ok(super::int(i)),
                Raw::Text(s) => super::parse(&s),
            }
        }
    }
}

/// Serde adapter: `Vec<Rational>` as a list of `"num/den"` strings.
pub mod text_vec {
    use super::Rational;
    use serde::{de, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&super::format(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<super::text::Raw>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|r| r.into_rational().map_err(de::Error::custom))
            .collect()
    }
}

/// Serde adapter: `Vec<Vec<Rational>>`.
pub mod text_matrix {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], serializer: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = rows
            .iter()
            .map(|row| row.iter().map(super::format).collect())
            .collect();
        text.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<super::text::Raw>>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|r| r.into_rational().map_err(de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Serde adapter: `Option<Rational>`.
pub mod text_opt {
    use super::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<Rational>, serializer: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => serializer.serialize_some(&super::format(v)),
            None => serializer.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Option<Rational>, D::Error> {
        let raw = Option::<super::text::Raw>::deserialize(deserializer)?;
        raw.map(|r| r.into_rational().map_err(de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse(" -7 ").unwrap(), int(-7));
        assert_eq!(format(&frac(-7, 2)), "-7/2");
        assert_eq!(format(&int(34)), "34");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse("1.5").is_err());
    }

    #[test]
    fn gcd_of_rationals() {
        assert_eq!(gcd(&[int(100), int(60), int(80)]), int(20));
        assert_eq!(gcd(&[frac(1, 2), frac(1, 3)]), frac(1, 6));
        assert_eq!(gcd(&[int(0), int(6)]), int(6));
        assert_eq!(gcd(&[int(0)]), int(0));
    }
}
