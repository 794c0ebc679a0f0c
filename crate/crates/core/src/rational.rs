//! Exact rational numbers.
//!
//! [`Rational`] wraps a big rational that is always kept in lowest terms with
//! a positive denominator. Its text form is `p/q` (just `p` when `q == 1`),
//! and [`Rational::to_decimal`] renders a fixed number of fractional digits
//! with round-half-to-even.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of fractional digits used when no precision is requested.
pub const DEFAULT_DIGITS: usize = 7;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let d = denom.into();
        assert!(!d.is_zero(), "zero denominator");
        Rational(BigRational::new(numer.into(), d))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i32) -> Self {
        Rational(num::traits::Pow::pow(&self.0, exp))
    }

    /// `true` when `0 <= self <= 1`.
    pub fn is_probability(&self) -> bool {
        !self.is_negative() && *self <= Rational::one()
    }

    /// `true` when `0 < self < 1`.
    pub fn is_open_unit(&self) -> bool {
        self.is_positive() && *self < Rational::one()
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        // Direct conversion loses everything once numerator and denominator
        // overflow f64 separately, so go through a scaled integer.
        if let (Some(n), Some(d)) = (self.numer().to_f64(), self.denom().to_f64()) {
            if n.is_finite() && d.is_finite() && d != 0.0 {
                return n / d;
            }
        }
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }

    /// Nearest integer to `self * 10^digits`, ties to even.
    fn scaled_half_even(&self, digits: usize) -> BigInt {
        let scale = num::pow(BigInt::from(10u32), digits);
        let n = self.numer() * &scale;
        let d = self.denom();
        let (q, r) = n.div_mod_floor(d);
        // 0 <= r < d
        let twice = &r * 2u32;
        match twice.cmp(d) {
            Ordering::Less => q,
            Ordering::Greater => q + 1u32,
            Ordering::Equal => {
                if q.is_even() {
                    q
                } else {
                    q + 1u32
                }
            }
        }
    }

    /// Fixed-point decimal with `digits` fractional digits, round-half-to-even.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled = self.scaled_half_even(digits);
        format_scaled(&scaled, digits)
    }

    /// Decimal rendering of `sqrt(self)` rounded to `digits` fractional
    /// digits, ties to even.
    pub fn sqrt_decimal(&self, digits: usize) -> Result<String> {
        let s = self.sqrt_scaled(digits)?;
        // Round up when (s + 1/2)^2 < self * 10^(2 digits).
        let scale = num::pow(BigInt::from(10u32), 2 * digits);
        let half_sq = (&s * 2u32 + 1u32).pow(2) * self.denom();
        let target = self.numer() * scale * 4u32;
        let rounded = match half_sq.cmp(&target) {
            Ordering::Less => s + 1u32,
            Ordering::Equal if s.is_odd() => s + 1u32,
            _ => s,
        };
        Ok(format_scaled(&rounded, digits))
    }

    /// `floor(sqrt(self) * 10^digits)`.
    pub(crate) fn sqrt_scaled(&self, digits: usize) -> Result<BigInt> {
        if self.is_negative() {
            return Err(Error::InvalidParameters(format!(
                "square root of negative value {self}"
            )));
        }
        let scale = num::pow(BigInt::from(10u32), 2 * digits);
        let v = (self.numer() * scale) / self.denom();
        Ok(v.sqrt())
    }

    /// Square root as a rational when `self` is a perfect square.
    pub fn exact_sqrt(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }

    /// Rational approximation of `sqrt(self)` good to `digits` decimals.
    pub fn sqrt_approx(&self, digits: usize) -> Result<Rational> {
        if let Some(r) = self.exact_sqrt() {
            return Ok(r);
        }
        let scaled = self.sqrt_scaled(digits)?;
        Ok(Rational::new(scaled, num::pow(BigInt::from(10u32), digits)))
    }

    /// Parses `p/q`, an integer, or a finite decimal such as `0.49`.
    pub fn parse(s: &str) -> Result<Rational> {
        s.parse()
    }
}

fn format_scaled(scaled: &BigInt, digits: usize) -> String {
    let neg = scaled.sign() == Sign::Minus;
    let mut s = scaled.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: Rational = n.parse()?;
            let d: Rational = d.parse()?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(n / d);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if frac.is_empty() && int_digits.is_empty() {
                return Err(bad());
            }
            if !frac.chars().all(|c| c.is_ascii_digit())
                || !int_digits.chars().all(|c| c.is_ascii_digit())
            {
                return Err(bad());
            }
            let digits = format!("{int_digits}{frac}");
            let n: BigInt = if digits.is_empty() {
                BigInt::zero()
            } else {
                digits.parse().map_err(|_| bad())?
            };
            let r = Rational::new(n, num::pow(BigInt::from(10u32), frac.len()));
            return Ok(if neg { -r } else { r });
        }
        // Scientific shorthand such as 1e6 for counts.
        if let Some((m, e)) = s.split_once(['e', 'E']) {
            let m: Rational = m.parse()?;
            let e: i32 = e.parse().map_err(|_| bad())?;
            return Ok(m * Rational::from_integer(10).pow(e));
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
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
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(v: $t) -> Self {
                Rational::from_integer(BigInt::from(v))
            }
        }
    )*};
}
from_int!(i32, i64, u32, u64, usize, i128, u128);

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational($tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational($tr::$m(self.0, &rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational($tr::$m(&self.0, rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'b Rational) -> Rational {
                Rational($tr::$m(&self.0, &rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign<Rational> for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

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

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Shorthand for `Rational::new(n, d)` with machine integers.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_text() {
        assert_eq!(ratio(2, 4).to_string(), "1/2");
        assert_eq!(ratio(-6, 3).to_string(), "-2");
        assert_eq!(ratio(3, -9).to_string(), "-1/3");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Rational::parse("3/6").unwrap(), ratio(1, 2));
        assert_eq!(Rational::parse("0.49").unwrap(), ratio(49, 100));
        assert_eq!(Rational::parse("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(Rational::parse("1e6").unwrap(), Rational::from(1_000_000));
        assert_eq!(Rational::parse(" 42 ").unwrap(), Rational::from(42));
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("abc").is_err());
        assert!(Rational::parse(".").is_err());
    }

    #[test]
    fn half_even_rounding() {
        assert_eq!(ratio(1, 8).to_decimal(2), "0.12");
        assert_eq!(ratio(3, 8).to_decimal(2), "0.38");
        assert_eq!(ratio(5, 2).to_decimal(0), "2");
        assert_eq!(ratio(7, 2).to_decimal(0), "4");
        assert_eq!(ratio(-1, 8).to_decimal(2), "-0.12");
        assert_eq!(ratio(1, 3).to_decimal(7), "0.3333333");
        assert_eq!(ratio(-2, 19).to_decimal(7), "-0.1052632");
        assert_eq!(Rational::from(12).to_decimal(3), "12.000");
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(ratio(9, 4).exact_sqrt(), Some(ratio(3, 2)));
        assert_eq!(Rational::from(2).exact_sqrt(), None);
        assert_eq!(Rational::from(2).sqrt_decimal(5).unwrap(), "1.41421");
        assert_eq!(Rational::from(2).sqrt_decimal(4).unwrap(), "1.4142");
        assert_eq!(Rational::from(3).sqrt_decimal(3).unwrap(), "1.732");
        assert_eq!(Rational::from(3).sqrt_decimal(4).unwrap(), "1.7321");
        assert_eq!(Rational::new(49, 4).sqrt_decimal(0).unwrap(), "4");
        assert!(Rational::from(-1).sqrt_decimal(3).is_err());
    }

    #[test]
    fn f64_of_huge_values() {
        let big = Rational::new(num::pow(BigInt::from(10), 400) + 1u32, num::pow(BigInt::from(10), 400));
        assert!((big.to_f64() - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = ratio(n, d);
            prop_assert_eq!(Rational::parse(&r.to_string()).unwrap(), r);
        }

        #[test]
        fn reordered_sums_agree(mut v in proptest::collection::vec((-500i64..500, 1i64..60), 1..60)) {
            let forward: Rational = v.iter().map(|&(n, d)| ratio(n, d)).sum();
            v.reverse();
            let backward: Rational = v.iter().map(|&(n, d)| ratio(n, d)).sum();
            prop_assert_eq!(forward, backward);
        }
    }
}
