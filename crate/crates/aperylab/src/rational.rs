//! Exact nonnegative rationals for invariant values.
//!
//! Elasticities, the Apéry half-factorial fraction, and mean Apéry
//! elasticities are all exact fractions; floating point only ever appears in
//! optional decimal rendering for human readers.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul};

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// A nonnegative rational number kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<u64>);

impl Rational {
    /// Reduced fraction `num/den`. Panics if `den` is zero.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational(Ratio::new(num, den))
    }

    pub fn integer(n: u64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn num(&self) -> u64 {
        *self.0.numer()
    }

    pub fn den(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Lossy decimal value, for display only.
    pub fn to_f64(&self) -> f64 {
        self.num() as f64 / self.den() as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Ratio prints "3/2", and "3" when the denominator is 1.
        write!(f, "{}", self.0)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(rhs.num() != 0, "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), Add::add)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Rational", 2)?;
        s.serialize_field("num", &self.num())?;
        s.serialize_field("den", &self.den())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let r = Rational::new(6, 10);
        assert_eq!((r.num(), r.den()), (3, 5));
        assert_eq!(r, Rational::new(3, 5));
    }

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(Rational::new(3, 2).to_string(), "3/2");
        assert_eq!(Rational::new(4, 4).to_string(), "1");
    }

    #[test]
    fn arithmetic_is_exact() {
        let mean = (Rational::one()
            + Rational::one()
            + Rational::one()
            + Rational::one()
            + Rational::new(3, 2))
            / Rational::integer(5);
        assert_eq!(mean, Rational::new(11, 10));
    }

    #[test]
    fn ordering_is_by_value() {
        assert!(Rational::new(4, 3) < Rational::new(3, 2));
        assert!(Rational::new(5, 2) > Rational::integer(2));
    }

    #[test]
    fn serializes_as_num_den() {
        let j = serde_json::to_value(Rational::new(3, 2)).unwrap();
        assert_eq!(j, serde_json::json!({"num": 3, "den": 2}));
    }
}
