//! Exact rational scalars.
//!
//! Every distance, function value and threshold in the crate is a [`Scalar`].
//! Values are always held in lowest terms with a positive denominator, and
//! render as `p/q` (or `p` when the denominator is one).

use alloc::string::String;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// An arbitrary-precision rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{literal}`")]
pub struct ParseScalarError {
    pub literal: String,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` in lowest terms.
    ///
    /// Panics when `den` is zero.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(value: BigRational) -> Self {
        Scalar(value)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn half(&self) -> Self {
        Scalar(&self.0 / BigInt::from(2))
    }

    pub fn recip(&self) -> Self {
        Scalar(self.0.recip())
    }

    /// Smallest integer `k` with `k >= self`.
    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Largest integer `k` with `k <= self`.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `true` when `other` divides `self` as integers. Both must be integral.
    pub fn int_divides(divisor: &Scalar, value: &Scalar) -> Option<bool> {
        if !divisor.is_integer() || !value.is_integer() {
            return None;
        }
        let d = divisor.numer();
        let v = value.numer();
        if d.is_zero() {
            return Some(v.is_zero());
        }
        Some(v.mod_floor(d).is_zero())
    }

    /// Rounds up onto the lattice `step * Z`.
    pub fn ceil_to_step(&self, step: &Scalar) -> Scalar {
        let k = (self / step).ceil_int();
        Scalar(BigRational::from_integer(k) * &step.0)
    }

    /// Lossy conversion, used only for ordering hints in human-facing text.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn max_of<'a, I: IntoIterator<Item = &'a Scalar>>(items: I) -> Option<Scalar> {
        items.into_iter().max().cloned()
    }

    pub fn min_of<'a, I: IntoIterator<Item = &'a Scalar>>(items: I) -> Option<Scalar> {
        items.into_iter().min().cloned()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts `p`, `-p`, `p/q`; no decimals, no floats.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError { literal: s.into() };
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let valid = |part: &str, signed: bool| {
            let digits = if signed {
                part.strip_prefix('-').unwrap_or(part)
            } else {
                part
            };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(num, true) || !valid(den, false) {
            return Err(err());
        }
        let n: BigInt = num.parse().map_err(|_| err())?;
        let d: BigInt = den.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Scalar(BigRational::new(n, d)))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_and_renders_lowest_terms() {
        let s: Scalar = "10/128".parse().unwrap();
        assert_eq!(s.to_string(), "5/64");
        assert_eq!("4/2".parse::<Scalar>().unwrap().to_string(), "2");
        assert_eq!("-3/6".parse::<Scalar>().unwrap().to_string(), "-1/2");
        assert_eq!(" 7 ".parse::<Scalar>().unwrap(), Scalar::from_int(7));
    }

    #[test]
    fn rejects_floats_and_zero_denominators() {
        for bad in ["0.5", "1/0", "", "/2", "1/-2", "1e3", "--1"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad}");
        }
    }

    #[test]
    fn ceil_to_step_snaps_up() {
        let step = Scalar::ratio(1, 64);
        assert_eq!(Scalar::ratio(99, 100).ceil_to_step(&step), Scalar::one());
        assert_eq!(Scalar::ratio(5, 64).ceil_to_step(&step), Scalar::ratio(5, 64));
    }

    #[test]
    fn divisibility_on_integers() {
        let two = Scalar::from_int(2);
        assert_eq!(Scalar::int_divides(&two, &Scalar::from_int(-12)), Some(true));
        assert_eq!(Scalar::int_divides(&two, &Scalar::from_int(3)), Some(false));
        assert_eq!(Scalar::int_divides(&two, &Scalar::ratio(1, 2)), None);
    }
}
