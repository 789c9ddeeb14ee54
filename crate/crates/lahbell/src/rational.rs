//! Exact rational scalars and the small combinatorial primitives on them.
//!
//! [`Rational`] wraps `num_rational::BigRational`, which keeps every value
//! in lowest terms with a positive denominator. All arithmetic here is
//! exact; nothing in this module touches floating point except the explicit
//! [`Rational::to_f64`] conversion.
//!
//! Text form is `num/den` with the denominator omitted when it is 1
//! (`"-3/4"`, `"7"`). [`std::fmt::Display`], [`std::str::FromStr`], and the
//! serde impls all use that one form, so values round-trip exactly through
//! JSON.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational number, always in canonical reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Builds `num/den`, reducing to canonical form.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Exact division that reports a zero divisor instead of panicking.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Integer power; negative exponents invert (error on zero base).
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.pow(exp)))
    }

    /// Nearest f64. Large magnitudes saturate following IEEE conversion.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact value of a finite f64 (every finite float is a dyadic
    /// rational). None for NaN or infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }

        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }

        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }

        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Plain `/` panics on zero like integer division does; use `checked_div`
// where the divisor is data-dependent.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::ParseRational {
            literal: s.to_string(),
            reason: reason.to_string(),
        };
        let body = s.trim();
        let (num, den) = match body.split_once('/') {
            None => (body, "1"),
            Some((n, d)) => (n, d),
        };
        let num: BigInt = num.parse().map_err(|_| err("numerator is not an integer"))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| err("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(err("denominator is zero"));
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

/// Binomial coefficient `C(n, k)`; zero outside `0 <= k <= n`.
pub fn binomial(n: usize, k: isize) -> Rational {
    if k < 0 || k as usize > n {
        return Rational::zero();
    }
    binom_u(n, k as usize)
}

pub(crate) fn binom_u(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    // acc stays integral after each division: after step i it equals C(n-k+i, i).
    for i in 1..=k {
        acc *= BigInt::from(n - k + i);
        acc /= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

/// Rising factorial `<x>_n = x (x+1) ... (x+n-1)`, with `<x>_0 = 1`.
pub fn rising_factorial(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..n {
        acc *= &(x + &Rational::from(i));
    }
    acc
}

/// Falling factorial `(x)_n = x (x-1) ... (x-n+1)`, with `(x)_0 = 1`.
pub fn falling_factorial(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..n {
        acc *= &(x - &Rational::from(i));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form_is_reduced_with_positive_denominator() {
        let x = Rational::new(2, 4).unwrap();
        assert_eq!(x.numer(), &BigInt::from(1));
        assert_eq!(x.denom(), &BigInt::from(2));

        let y = Rational::new(1, -2).unwrap();
        assert_eq!(y.numer(), &BigInt::from(-1));
        assert_eq!(y.denom(), &BigInt::from(2));

        assert_eq!(Rational::new(-6, -4).unwrap(), r("3/2"));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(r("1/2") + r("1/3"), r("5/6"));
        assert_eq!(r("1/2") - r("1/3"), r("1/6"));
        assert_eq!(r("2/3") * r("3/4"), r("1/2"));
        assert_eq!(r("1/2").checked_div(&r("3/4")).unwrap(), r("2/3"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            r("1").checked_div(&Rational::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(Rational::new(1, 0), Err(Error::DivisionByZero));
        assert_eq!(Rational::zero().pow(-1), Err(Error::DivisionByZero));
    }

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(r("4/2").to_string(), "2");
        assert_eq!(r("-3/6").to_string(), "-1/2");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/2/3".parse::<Rational>().is_err());
        assert!("a/2".parse::<Rational>().is_err());
        assert!("1.5".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_uses_the_string_form() {
        let x = r("-7/3");
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"-7/3\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), r("1"));
        assert_eq!(factorial(1), r("1"));
        assert_eq!(factorial(5), r("120"));
        assert_eq!(factorial(20), r("2432902008176640000"));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), r("6"));
        assert_eq!(binomial(0, 0), r("1"));
        assert_eq!(binomial(3, 5), r("0"));
        assert_eq!(binomial(3, -1), r("0"));
        assert_eq!(binomial(52, 5), r("2598960"));
    }

    #[test]
    fn rising_and_falling_factorials() {
        // <1>_n = n!
        for n in 0..8 {
            assert_eq!(rising_factorial(&r("1"), n), factorial(n));
        }
        assert_eq!(rising_factorial(&r("1/2"), 3), r("15/8"));
        assert_eq!(falling_factorial(&r("5"), 3), r("60"));
        assert_eq!(falling_factorial(&r("1/2"), 2), r("-1/4"));
        // (x)_n = (-1)^n <-x>_n
        let x = r("-7/3");
        assert_eq!(
            falling_factorial(&x, 5),
            -rising_factorial(&(-&x), 5)
        );
    }

    #[test]
    fn to_f64_matches_exact_small_cases() {
        assert_eq!(r("1/2").to_f64(), 0.5);
        assert_eq!(r("-13").to_f64(), -13.0);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_rational() -> impl Strategy<Value = Rational> {
            (any::<i32>(), 1..10_000u32)
                .prop_map(|(n, d)| Rational::new(i64::from(n), i64::from(d)).unwrap())
        }

        proptest! {
            #[test]
            fn field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
                prop_assert_eq!(&a + &Rational::zero(), a.clone());
                prop_assert_eq!(&a * &Rational::one(), a.clone());
                prop_assert_eq!(&a - &a, Rational::zero());
            }

            #[test]
            fn division_inverts_multiplication(a in arb_rational(), b in arb_rational()) {
                prop_assume!(!b.is_zero());
                prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a);
            }

            #[test]
            fn display_round_trips(a in arb_rational()) {
                let shown = a.to_string();
                prop_assert_eq!(shown.parse::<Rational>().unwrap(), a);
            }

            #[test]
            fn pascal_rule(n in 1usize..40, k in 0isize..41) {
                prop_assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k)
                );
            }
        }
    }
}
