//! Exact rational scalars.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn half() -> Q {
    q(1, 2)
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn zero() -> Q {
    Q::zero()
}

/// `x^m` for a possibly negative exponent. Panics on `0^negative`.
pub fn powi(x: &Q, m: i64) -> Q {
    let mut base = if m < 0 { x.recip() } else { x.clone() };
    let mut e = m.unsigned_abs();
    let mut acc = Q::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"3"`, `"-1/2"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

pub fn sign_str(x: &Q) -> &'static str {
    if x.is_negative() {
        "-"
    } else {
        "+"
    }
}

/// JSON wrapper: integers serialize as numbers, everything else as `"n/d"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(pub Q);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Some(v) = self.0.numer().to_i64() {
                return s.serialize_i64(v);
            }
        }
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(|i| Rat(qi(i)))
                .ok_or_else(|| D::Error::custom("rational must be an integer or \"n/d\" string")),
            serde_json::Value::String(s) => parse_q(&s)
                .map(Rat)
                .ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))),
            _ => Err(D::Error::custom("expected rational")),
        }
    }
}

/// Numerator and denominator as i64, for the `(k, num, den)` triple format.
pub fn to_num_den(x: &Q) -> Option<(i64, i64)> {
    Some((x.numer().to_i64()?, x.denom().to_i64()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-3/6"), Some(q(-1, 2)));
        assert_eq!(fmt_q(&q(4, 2)), "2");
        assert_eq!(parse_q("1/0"), None);
    }

    #[test]
    fn powers() {
        assert_eq!(powi(&qi(-1), 3), qi(-1));
        assert_eq!(powi(&qi(2), -2), q(1, 4));
        assert_eq!(powi(&qi(5), 0), qi(1));
    }
}
