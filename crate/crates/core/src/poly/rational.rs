//! Exact rationals.
//!
//! `Rational` is `num_rational::BigRational`, which is kept in lowest terms
//! with a positive denominator after every operation. Everything that leaves
//! the crate as text uses the `"num/den"` form (`"3"`, `"-1/2"`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"n"` or `"n/d"` (surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| RationalParseError::Invalid(text.to_string()))?;
    let den = BigInt::from_str(den).map_err(|_| RationalParseError::Invalid(text.to_string()))?;
    if den.is_zero() {
        return Err(RationalParseError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"num/den"` text; integers print without a denominator.
pub fn to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn factorial(k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    Rational::from_integer(acc)
}

pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

/// Serde adapter writing a `Rational` as its `"num/den"` string.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(qs.iter().map(to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Vec<Vec<Rational>>`.
pub mod serde_vec_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(rows.iter().map(|r| r.iter().map(to_string).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&to_string(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text() {
        assert_eq!(to_string(&rat(6, -4)), "-3/2");
        assert_eq!(to_string(&rat(0, 5)), "0");
        assert_eq!(to_string(&int(3)), "3");
        assert_eq!(parse_rational(" 10/4 ").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(RationalParseError::ZeroDenominator(_))
        ));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn zero_is_zero_over_one() {
        let z = rat(1, 3) - rat(2, 6);
        assert!(z.numer().is_zero());
        assert!(z.denom().is_one());
    }
}
