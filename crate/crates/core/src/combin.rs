//! Binomial and multinomial coefficients.

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `C(n, r)` as a big integer; zero when `r` is out of range.
pub fn binomial_big(n: u64, r: i64) -> BigInt {
    if r < 0 || r as u64 > n {
        return BigInt::zero();
    }
    let r = (r as u64).min(n - r as u64);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, r)` as an exact rational integer.
pub fn binomial(n: u64, r: i64) -> Rational {
    Rational::from_integer(binomial_big(n, r))
}

/// `C(n, r)` in machine integers. Panics on overflow, which cannot happen for
/// `n <= 62`.
pub fn choose(n: u64, r: i64) -> u64 {
    if r < 0 || r as u64 > n {
        return 0;
    }
    let r = (r as u64).min(n - r as u64);
    let mut acc: u128 = 1;
    for i in 0..r as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n! / (parts_1! ... parts_k!)`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<Rational> {
    let sum: u64 = parts.iter().sum();
    if sum != n {
        return Err(Error::PartsMismatch { n, sum });
    }
    // Product of binomials avoids the large factorials.
    let mut acc = BigInt::one();
    let mut left = n;
    for &p in parts {
        acc *= binomial_big(left, p as i64);
        left -= p;
    }
    Ok(Rational::from_integer(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn by_factorials(n: u64, r: u64) -> BigInt {
        factorial(n) / (factorial(r) * factorial(n - r))
    }

    #[test]
    fn known_values() {
        assert_eq!(binomial(52, 5), Rational::from(2_598_960u64));
        assert_eq!(binomial_big(52, 5), by_factorials(52, 5));
        assert_eq!(binomial(49, 6), Rational::from(13_983_816u64));
        assert_eq!(binomial(7, 0), Rational::one());
        assert_eq!(binomial(5, 6), Rational::zero());
        assert_eq!(binomial(5, -1), Rational::zero());
        assert_eq!(choose(47, 5), 1_533_939);
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(13, &[11, 1, 0, 0, 1]).unwrap(), Rational::from(156));
        assert_eq!(multinomial(9, &[9]).unwrap(), Rational::one());
        assert_eq!(multinomial(6, &[6, 0, 0]).unwrap(), Rational::one());
        assert_eq!(
            multinomial(5, &[2, 2]),
            Err(Error::PartsMismatch { n: 5, sum: 4 })
        );
        let f = |n| Rational::from_integer(factorial(n));
        assert_eq!(
            multinomial(10, &[3, 3, 4]).unwrap(),
            f(10) / (f(3) * f(3) * f(4))
        );
    }

    proptest! {
        #[test]
        fn symmetric(n in 0u64..80, r in 0u64..80) {
            prop_assume!(r <= n);
            prop_assert_eq!(binomial(n, r as i64), binomial(n, (n - r) as i64));
            prop_assert_eq!(binomial_big(n, r as i64), by_factorials(n, r));
        }

        #[test]
        fn row_sums(n in 0u64..=30) {
            let s: Rational = (0..=n as i64).map(|r| binomial(n, r)).sum();
            prop_assert_eq!(s, Rational::from(1u64 << n));
        }
    }
}
