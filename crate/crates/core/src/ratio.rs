//! Exact rational numbers.
//!
//! Every support value, target and threshold in the crate is a [`Ratio`].
//! Values are kept in lowest terms with a positive denominator, and parse
//! from either decimal (`"1.9"`) or fraction (`"19/10"`) strings.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ratio(BigRational);

impl Ratio {
    /// `numer / denom`; fails on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::ParseRatio { input: format!("{numer}/{denom}"), reason: "zero denominator".into() });
        }
        Ok(Ratio(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_integer(value: i64) -> Self {
        Ratio(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Ratio(BigRational::zero())
    }

    pub fn one() -> Self {
        Ratio(BigRational::one())
    }

    pub fn half() -> Self {
        Ratio(BigRational::new(1.into(), 2.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// True when the value is an integer multiple of 1/2.
    pub fn is_half_integer_multiple(&self) -> bool {
        (&self.0 * BigInt::from(2)).is_integer()
    }

    /// Rounds toward negative infinity.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Rounds toward positive infinity.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn abs(&self) -> Self {
        Ratio(self.0.abs())
    }

    pub fn double(&self) -> Self {
        Ratio(&self.0 * BigInt::from(2))
    }

    pub fn halve(&self) -> Self {
        Ratio(&self.0 / BigInt::from(2))
    }

    /// Lossy conversion, for display only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Converts an integer-valued big integer into a count, clamping negatives to zero.
pub(crate) fn clamp_count(value: BigInt) -> u64 {
    if value.is_negative() {
        0
    } else {
        value.to_u64().expect("win count exceeds u64")
    }
}

impl From<i64> for Ratio {
    fn from(value: i64) -> Self {
        Ratio::from_integer(value)
    }
}

impl From<i32> for Ratio {
    fn from(value: i32) -> Self {
        Ratio::from_integer(value.into())
    }
}

impl From<u64> for Ratio {
    fn from(value: u64) -> Self {
        Ratio(BigRational::from_integer(value.into()))
    }
}

impl From<usize> for Ratio {
    fn from(value: usize) -> Self {
        Ratio(BigRational::from_integer(value.into()))
    }
}

impl From<BigInt> for Ratio {
    fn from(value: BigInt) -> Self {
        Ratio(BigRational::from_integer(value))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Ratio> for &Ratio {
            type Output = Ratio;
            fn $method(self, rhs: &Ratio) -> Ratio {
                Ratio((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Ratio> for Ratio {
            type Output = Ratio;
            fn $method(self, rhs: Ratio) -> Ratio {
                Ratio(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Ratio> for Ratio {
            type Output = Ratio;
            fn $method(self, rhs: &Ratio) -> Ratio {
                Ratio(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Ratio> for &Ratio {
            type Output = Ratio;
            fn $method(self, rhs: Ratio) -> Ratio {
                Ratio((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for Ratio {
    type Output = Ratio;
    fn neg(self) -> Ratio {
        Ratio(-self.0)
    }
}

impl Neg for &Ratio {
    type Output = Ratio;
    fn neg(self) -> Ratio {
        Ratio(-&self.0)
    }
}

impl Sum for Ratio {
    fn sum<I: Iterator<Item = Ratio>>(iter: I) -> Ratio {
        Ratio(iter.map(|r| r.0).sum())
    }
}

impl<'a> Sum<&'a Ratio> for Ratio {
    fn sum<I: Iterator<Item = &'a Ratio>>(iter: I) -> Ratio {
        Ratio(iter.fold(BigRational::zero(), |acc, r| acc + &r.0))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ratio({self})")
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: &str| Error::ParseRatio { input: input.to_string(), reason: reason.to_string() };
        let s = input.trim();
        if s.is_empty() {
            return Err(fail("empty string"));
        }
        if let Some((p, q)) = s.split_once('/') {
            let numer: BigInt = parse_signed_integer(p.trim()).ok_or_else(|| fail("bad numerator"))?;
            let denom: BigInt = parse_signed_integer(q.trim()).ok_or_else(|| fail("bad denominator"))?;
            if denom.is_zero() {
                return Err(fail("zero denominator"));
            }
            return Ok(Ratio(BigRational::new(numer, denom)));
        }
        let (negative, body) = match s.as_bytes()[0] {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(fail("no digits"));
        }
        let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) {
            return Err(fail("expected a decimal or p/q fraction"));
        }
        let digits = format!("{int_part}{frac_part}");
        let mut numer: BigInt =
            if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| fail("bad digits"))? };
        if negative {
            numer = -numer;
        }
        let denom = num::pow(BigInt::from(10), frac_part.len());
        Ok(Ratio(BigRational::new(numer, denom)))
    }
}

fn parse_signed_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Ratio {
        s.parse().unwrap()
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(r("1.9"), r("19/10"));
        assert_eq!(r("0.38"), Ratio::new(19, 50).unwrap());
        assert_eq!(r("-2.5"), Ratio::new(-5, 2).unwrap());
        assert_eq!(r(".5"), Ratio::half());
        assert_eq!(r("3"), Ratio::from_integer(3));
        assert_eq!(r("6/4"), Ratio::new(3, 2).unwrap());
        assert_eq!(r("3/-4"), Ratio::new(-3, 4).unwrap());
        assert!(r("3/-4").denom() > &BigInt::zero());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "1/", "/2", ".", "-", "1e3", "1/2/3"] {
            assert!(bad.parse::<Ratio>().is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn floor_and_ceil_are_exact() {
        assert_eq!(r("3.8").floor(), 3.into());
        assert_eq!(r("-0.4").ceil(), 0.into());
        assert_eq!(r("-0.4").floor(), (-1).into());
        assert_eq!(r("-1.2").ceil(), (-1).into());
        assert_eq!(r("4").ceil(), 4.into());
        assert_eq!(r("4").floor(), 4.into());
    }

    #[test]
    fn half_integer_test() {
        assert!(r("0.5").is_half_integer_multiple());
        assert!(r("3").is_half_integer_multiple());
        assert!(r("0").is_half_integer_multiple());
        assert!(!r("0.3").is_half_integer_multiple());
        assert!(!r("7/4").is_half_integer_multiple());
    }

    #[test]
    fn displays_integers_without_denominator() {
        assert_eq!(r("4").to_string(), "4");
        assert_eq!(r("3.5").to_string(), "7/2");
        assert_eq!(r("-1.5").to_string(), "-3/2");
    }

    proptest! {
        #[test]
        fn display_round_trips(p in -10_000i64..10_000, q in 1i64..500) {
            let x = Ratio::new(p, q).unwrap();
            prop_assert_eq!(x.to_string().parse::<Ratio>().unwrap(), x.clone());
            let json = serde_json::to_string(&x).unwrap();
            prop_assert_eq!(serde_json::from_str::<Ratio>(&json).unwrap(), x);
        }

        #[test]
        fn decimal_strings_round_trip(int in 0u32..1000, frac in 0u32..10_000) {
            let text = format!("{int}.{frac:04}");
            let x: Ratio = text.parse().unwrap();
            let expected = Ratio::new(int as i64 * 10_000 + frac as i64, 10_000).unwrap();
            prop_assert_eq!(x.to_string().parse::<Ratio>().unwrap(), x.clone());
            prop_assert_eq!(x, expected);
        }

        #[test]
        fn floor_ceil_bracket(p in -10_000i64..10_000, q in 1i64..500) {
            let x = Ratio::new(p, q).unwrap();
            let lo = Ratio::from(x.floor());
            let hi = Ratio::from(x.ceil());
            prop_assert!(lo <= x && x <= hi);
            prop_assert!(&hi - &lo <= Ratio::one());
            prop_assert_eq!(x.is_integer(), lo == hi);
        }
    }
}
