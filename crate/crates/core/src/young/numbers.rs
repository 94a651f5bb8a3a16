use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Exact non-negative integer count (irrep dimensions, hook products, factorials).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn new(value: BigUint) -> Self {
        BigCount(value)
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // Small counts stay numeric; anything wider than u64 is written as a decimal string.
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

/// `n!` as an exact count.
pub fn factorial(n: usize) -> BigCount {
    let mut acc = BigUint::one();
    for i in 2..=n as u64 {
        acc *= i;
    }
    BigCount(acc)
}

/// Exact rational in canonical reduced form with positive denominator.
///
/// Displays (and serializes) as `"p/q"` even when `q = 1`, so report fields have a
/// single stable shape.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRatio(BigRational);

impl ExactRatio {
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        ExactRatio(BigRational::new(numer, denom))
    }

    pub fn from_counts(numer: &BigCount, denom: &BigCount) -> Self {
        Self::new(numer.to_bigint(), denom.to_bigint())
    }

    pub fn from_integer(v: i64) -> Self {
        ExactRatio(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::new(BigInt::from(numer), BigInt::from(denom))
    }

    pub fn zero() -> Self {
        ExactRatio(BigRational::zero())
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<BigRational> for ExactRatio {
    fn from(r: BigRational) -> Self {
        ExactRatio(r)
    }
}

impl std::ops::Mul<&ExactRatio> for &ExactRatio {
    type Output = ExactRatio;
    fn mul(self, rhs: &ExactRatio) -> ExactRatio {
        ExactRatio(&self.0 * &rhs.0)
    }
}

impl std::ops::Sub<&ExactRatio> for &ExactRatio {
    type Output = ExactRatio;
    fn sub(self, rhs: &ExactRatio) -> ExactRatio {
        ExactRatio(&self.0 - &rhs.0)
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_reduced_and_displayed_with_denominator() {
        let r = ExactRatio::from_ratio(6, 4);
        assert_eq!(r.to_string(), "3/2");
        assert_eq!(ExactRatio::from_integer(3).to_string(), "3/1");
        assert_eq!(ExactRatio::from_ratio(0, 7).to_string(), "0/1");
        assert_eq!(ExactRatio::from_ratio(2, -4).to_string(), "-1/2");
    }

    #[test]
    fn factorial_exceeds_u64_exactly() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(20), 2_432_902_008_176_640_000);
        assert!(factorial(21).to_u64().is_none());
        assert_eq!(factorial(21).to_string(), "51090942171709440000");
    }
}
