use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CubeError;

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactRational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_integer(n: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn half() -> Self {
        Self::new(1, 2)
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn midpoint(&self, other: &ExactRational) -> ExactRational {
        (self + other) * &Self::half()
    }

    pub fn min<'a>(&'a self, other: &'a ExactRational) -> &'a ExactRational {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max<'a>(&'a self, other: &'a ExactRational) -> &'a ExactRational {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Decimal expansion rounded half away from zero to `places` digits,
    /// trailing zeros removed.
    pub fn to_decimal(&self, places: u32) -> String {
        let scale = BigInt::from(10u32).pow(places);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let d: &BigInt = scaled.denom();
        let half = if scaled.is_negative() { -d } else { d.clone() };
        let twice: BigInt = scaled.numer() * 2 + half;
        let rounded: BigInt = twice / (d * 2);
        let negative = rounded.is_negative();
        let abs = rounded.abs();
        let int_part = &abs / &scale;
        let frac_part = &abs % &scale;
        let mut s = if negative { "-".to_string() } else { String::new() };
        s.push_str(&int_part.to_string());
        if places > 0 && !frac_part.is_zero() {
            let frac = format!("{:0>width$}", frac_part.to_string(), width = places as usize);
            s.push('.');
            s.push_str(frac.trim_end_matches('0'));
        }
        s
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = CubeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CubeError::Parse(format!("bad rational {s:?}"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(ExactRational(BigRational::new(n, d)))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &ExactRational) -> ExactRational {
                ExactRational(self.0.$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_text() {
        let r: ExactRational = "6/8".parse().unwrap();
        assert_eq!(r.to_string(), "3/4");
        assert_eq!("-2/-4".parse::<ExactRational>().unwrap().to_string(), "1/2");
        assert_eq!("5".parse::<ExactRational>().unwrap().to_string(), "5/1");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("x/2".parse::<ExactRational>().is_err());
    }

    #[test]
    fn arithmetic_is_exact() {
        let third = ExactRational::new(1, 3);
        let sum = &third + &third + third.clone();
        assert_eq!(sum, ExactRational::one());
        assert_eq!(ExactRational::new(1, 4).midpoint(&ExactRational::new(3, 4)), ExactRational::half());
    }

    #[test]
    fn decimals() {
        assert_eq!(ExactRational::new(1, 3).to_decimal(4), "0.3333");
        assert_eq!(ExactRational::new(2, 3).to_decimal(4), "0.6667");
        assert_eq!(ExactRational::new(256, 1).to_decimal(4), "256");
        assert_eq!(ExactRational::new(-1, 8).to_decimal(2), "-0.13");
        assert_eq!(ExactRational::new(5, 2).to_decimal(3), "2.5");
    }

    #[test]
    fn serde_roundtrip() {
        let r = ExactRational::new(7, 12);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"7/12\"");
        assert_eq!(serde_json::from_str::<ExactRational>(&s).unwrap(), r);
    }
}
