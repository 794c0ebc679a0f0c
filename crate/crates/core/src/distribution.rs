//! The standard discrete distributions with exact mass functions.
//!
//! Every kind except Poisson yields an exact [`Rational`]. Poisson involves
//! `e^{-λ}` and is evaluated to a requested number of decimal digits.

use num::{BigInt, Zero};
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, binomial_big, multinomial};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Precision used for Poisson masses when none is given.
pub const POISSON_DEFAULT_DIGITS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Binomial { n: u64, p: Rational },
    Hypergeometric { population: u64, successes: u64, draws: u64 },
    /// Draws without replacement from an urn with `counts[i]` balls of color `i`.
    MultivariateHypergeometric { counts: Vec<u64>, draws: u64 },
    Multinomial { n: u64, probs: Vec<Rational> },
    /// Number of trials up to and including the first success; support 1, 2, ...
    Geometric { p: Rational },
    /// Number of trials up to and including the `r`-th success.
    NegativeBinomial { r: u64, p: Rational },
    Poisson { lambda: Rational, digits: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Count(i64),
    Vector(Vec<i64>),
}

impl From<i64> for Outcome {
    fn from(k: i64) -> Self {
        Outcome::Count(k)
    }
}

impl From<Vec<i64>> for Outcome {
    fn from(v: Vec<i64>) -> Self {
        Outcome::Vector(v)
    }
}

/// A probability mass: exact, or accurate to `digits` decimal places.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mass {
    Exact(Rational),
    Approx { value: Rational, digits: usize },
}

impl Mass {
    pub fn value(&self) -> &Rational {
        match self {
            Mass::Exact(v) | Mass::Approx { value: v, .. } => v,
        }
    }

    pub fn into_value(self) -> Rational {
        match self {
            Mass::Exact(v) | Mass::Approx { value: v, .. } => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Mass::Exact(_))
    }
}

fn check_prob(p: &Rational) -> Result<()> {
    if p.is_probability() {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("probability {p} outside [0, 1]")))
    }
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        use DistributionSpec::*;
        match self {
            Binomial { p, .. } => check_prob(p),
            Hypergeometric { population, successes, draws } => {
                if successes > population || draws > population {
                    Err(Error::InvalidParameters(format!(
                        "hypergeometric needs successes ({successes}) and draws ({draws}) <= population ({population})"
                    )))
                } else {
                    Ok(())
                }
            }
            MultivariateHypergeometric { counts, draws } => {
                let total: u64 = counts.iter().sum();
                if *draws > total {
                    Err(Error::InvalidParameters(format!(
                        "cannot draw {draws} from {total}"
                    )))
                } else {
                    Ok(())
                }
            }
            Multinomial { probs, .. } => {
                for p in probs {
                    check_prob(p)?;
                }
                let s: Rational = probs.iter().sum();
                if s.is_one() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameters(format!(
                        "multinomial probabilities sum to {s}"
                    )))
                }
            }
            Geometric { p } | NegativeBinomial { p, .. } => {
                check_prob(p)?;
                if p.is_zero() {
                    Err(Error::InvalidParameters("success probability is 0".into()))
                } else {
                    Ok(())
                }
            }
            Poisson { lambda, .. } => {
                if lambda.is_negative() {
                    Err(Error::InvalidParameters(format!("negative rate {lambda}")))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Probability mass at `outcome`. Outcomes outside the support have mass 0.
    pub fn pmf(&self, outcome: impl Into<Outcome>) -> Result<Mass> {
        self.validate()?;
        use DistributionSpec::*;
        let outcome = outcome.into();
        let zero = || Ok(Mass::Exact(Rational::zero()));
        match (self, &outcome) {
            (Binomial { n, p }, Outcome::Count(k)) => {
                if *k < 0 || *k as u64 > *n {
                    return zero();
                }
                let q = Rational::one() - p;
                Ok(Mass::Exact(
                    binomial(*n, *k) * p.pow(*k as i32) * q.pow((*n as i64 - *k) as i32),
                ))
            }
            (Hypergeometric { population, successes, draws }, Outcome::Count(k)) => {
                let num = binomial_big(*successes, *k)
                    * binomial_big(population - successes, *draws as i64 - *k);
                Ok(Mass::Exact(Rational::new(
                    num,
                    binomial_big(*population, *draws as i64),
                )))
            }
            (MultivariateHypergeometric { counts, draws }, Outcome::Vector(ks)) => {
                if ks.len() != counts.len() || ks.iter().sum::<i64>() != *draws as i64 {
                    return zero();
                }
                let mut num = BigInt::from(1);
                for (&c, &k) in counts.iter().zip(ks) {
                    num *= binomial_big(c, k);
                }
                let total: u64 = counts.iter().sum();
                Ok(Mass::Exact(Rational::new(
                    num,
                    binomial_big(total, *draws as i64),
                )))
            }
            (Multinomial { n, probs }, Outcome::Vector(ks)) => {
                if ks.len() != probs.len()
                    || ks.iter().any(|&k| k < 0)
                    || ks.iter().sum::<i64>() != *n as i64
                {
                    return zero();
                }
                let parts: Vec<u64> = ks.iter().map(|&k| k as u64).collect();
                let mut v = multinomial(*n, &parts)?;
                for (p, &k) in probs.iter().zip(ks) {
                    v *= &p.pow(k as i32);
                }
                Ok(Mass::Exact(v))
            }
            (Geometric { p }, Outcome::Count(k)) => {
                if *k < 1 {
                    return zero();
                }
                Ok(Mass::Exact(p * (Rational::one() - p).pow((*k - 1) as i32)))
            }
            (NegativeBinomial { r, p }, Outcome::Count(k)) => {
                if *k < *r as i64 || *r == 0 {
                    return if *r == 0 && *k == 0 {
                        Ok(Mass::Exact(Rational::one()))
                    } else {
                        zero()
                    };
                }
                let q = Rational::one() - p;
                Ok(Mass::Exact(
                    binomial((*k - 1) as u64, *r as i64 - 1)
                        * p.pow(*r as i32)
                        * q.pow((*k - *r as i64) as i32),
                ))
            }
            (Poisson { lambda, digits }, Outcome::Count(k)) => {
                if *k < 0 {
                    return zero();
                }
                Ok(Mass::Approx {
                    value: poisson_mass(lambda, *k as u64, *digits),
                    digits: *digits,
                })
            }
            _ => Err(Error::InvalidParameters(
                "outcome shape does not match the distribution".into(),
            )),
        }
    }

    /// Every outcome with positive mass, for the finite-support kinds.
    pub fn support(&self) -> Option<Vec<Outcome>> {
        use DistributionSpec::*;
        match self {
            Binomial { n, .. } => Some((0..=*n as i64).map(Outcome::Count).collect()),
            Hypergeometric { population, successes, draws } => {
                let lo = (*draws as i64 - (*population - *successes) as i64).max(0);
                let hi = (*draws).min(*successes) as i64;
                Some((lo..=hi).map(Outcome::Count).collect())
            }
            MultivariateHypergeometric { counts, draws } => Some(
                compositions(*draws, counts)
                    .into_iter()
                    .map(Outcome::Vector)
                    .collect(),
            ),
            Multinomial { n, probs } => {
                let caps = vec![*n; probs.len()];
                Some(
                    compositions(*n, &caps)
                        .into_iter()
                        .map(Outcome::Vector)
                        .collect(),
                )
            }
            Geometric { .. } | NegativeBinomial { .. } | Poisson { .. } => None,
        }
    }

    /// Exact mean for every kind.
    pub fn mean(&self) -> Result<Vec<Rational>> {
        self.validate()?;
        use DistributionSpec::*;
        Ok(match self {
            Binomial { n, p } => vec![Rational::from(*n) * p],
            Hypergeometric { population, successes, draws } => {
                vec![Rational::new(draws * successes, *population)]
            }
            MultivariateHypergeometric { counts, draws } => {
                let total: u64 = counts.iter().sum();
                counts
                    .iter()
                    .map(|&c| Rational::new(draws * c, total))
                    .collect()
            }
            Multinomial { n, probs } => probs.iter().map(|p| Rational::from(*n) * p).collect(),
            Geometric { p } => vec![p.recip()],
            NegativeBinomial { r, p } => vec![Rational::from(*r) / p],
            Poisson { lambda, .. } => vec![lambda.clone()],
        })
    }
}

/// All vectors of nonnegative integers with `v[i] <= caps[i]` summing to `total`.
fn compositions(total: u64, caps: &[u64]) -> Vec<Vec<i64>> {
    fn go(left: u64, caps: &[u64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        match caps.split_first() {
            None => {
                if left == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&c, rest)) => {
                let room: u64 = rest.iter().sum();
                for k in 0..=c.min(left) {
                    if left - k > room {
                        continue;
                    }
                    cur.push(k as i64);
                    go(left - k, rest, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(total, caps, &mut Vec::new(), &mut out);
    out
}

/// `e^{-λ} λ^k / k!` correct to `digits` decimals (truncated, not rounded).
fn poisson_mass(lambda: &Rational, k: u64, digits: usize) -> Rational {
    // Fixed-point with guard digits; all series terms are positive.
    let guard = digits + 20;
    let scale = num::pow(BigInt::from(10u32), guard);
    let fixed = |r: &Rational| -> BigInt { (r.numer() * &scale) / r.denom() };
    // e^{λ} = Σ λ^j / j!
    let mut term = Rational::one();
    let mut sum = BigInt::zero();
    let mut j = 0u64;
    loop {
        let t = fixed(&term);
        if t.is_zero() && Rational::from(j) > *lambda {
            break;
        }
        sum += t;
        j += 1;
        term = term * lambda / Rational::from(j);
    }
    let exp_lambda = Rational::new(sum, scale.clone());
    let head = lambda.pow(k as i32) / Rational::from_integer(crate::combin::factorial(k));
    let v = head / exp_lambda;
    let trunc = num::pow(BigInt::from(10u32), digits);
    Rational::new((v.numer() * &trunc) / v.denom(), trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn total(spec: &DistributionSpec) -> Rational {
        spec.support()
            .unwrap()
            .into_iter()
            .map(|o| spec.pmf(o).unwrap().into_value())
            .sum()
    }

    #[test]
    fn mere_first_problem() {
        let spec = DistributionSpec::Binomial { n: 4, p: ratio(1, 6) };
        let none = spec.pmf(0).unwrap().into_value();
        assert_eq!(Rational::one() - none, ratio(671, 1296));
    }

    #[test]
    fn keno_ten_spot_six_catches() {
        let spec = DistributionSpec::Hypergeometric { population: 80, successes: 10, draws: 20 };
        assert_eq!(
            spec.pmf(6).unwrap().into_value(),
            ratio(24_869_385, 2_166_436_987)
        );
    }

    #[test]
    fn geometric_certain() {
        let spec = DistributionSpec::Geometric { p: Rational::one() };
        assert_eq!(spec.pmf(1).unwrap().into_value(), Rational::one());
        assert_eq!(spec.pmf(2).unwrap().into_value(), Rational::zero());
        assert_eq!(spec.pmf(0).unwrap().into_value(), Rational::zero());
    }

    #[test]
    fn negative_binomial_matches_convolution() {
        // Trials to second success = sum of two independent geometrics.
        let p = ratio(1, 3);
        let g = DistributionSpec::Geometric { p: p.clone() };
        let nb = DistributionSpec::NegativeBinomial { r: 2, p };
        for k in 2..12 {
            let conv: Rational = (1..k)
                .map(|i| g.pmf(i).unwrap().into_value() * g.pmf(k - i).unwrap().into_value())
                .sum();
            assert_eq!(nb.pmf(k).unwrap().into_value(), conv);
        }
    }

    #[test]
    fn multinomial_and_multivariate_sum_to_one() {
        let m = DistributionSpec::Multinomial {
            n: 6,
            probs: vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)],
        };
        assert_eq!(total(&m), Rational::one());
        let mh = DistributionSpec::MultivariateHypergeometric { counts: vec![6, 1, 42], draws: 6 };
        assert_eq!(total(&mh), Rational::one());
        assert_eq!(
            mh.pmf(vec![6, 0, 0]).unwrap().into_value(),
            ratio(1, 13_983_816)
        );
    }

    #[test]
    fn poisson_against_known_decimal() {
        let spec = DistributionSpec::Poisson { lambda: Rational::one(), digits: 30 };
        let m = spec.pmf(0).unwrap();
        assert!(!m.is_exact());
        // e^{-1}
        assert_eq!(m.value().to_decimal(25), "0.3678794411714423215955238");
        let spec = DistributionSpec::Poisson { lambda: ratio(5, 2), digits: 20 };
        let s: Rational = (0..60).map(|k| spec.pmf(k).unwrap().into_value()).sum();
        assert!((s.to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DistributionSpec::Binomial { n: 3, p: ratio(3, 2) }.pmf(1).is_err());
        assert!(DistributionSpec::Hypergeometric { population: 5, successes: 2, draws: 6 }
            .pmf(1)
            .is_err());
        assert!(DistributionSpec::Geometric { p: Rational::zero() }.pmf(1).is_err());
    }

    proptest! {
        #[test]
        fn binomial_sums_to_one(n in 0u64..=60, a in 0i64..=20, b in 1i64..=20) {
            prop_assume!(a <= b);
            let spec = DistributionSpec::Binomial { n, p: ratio(a, b) };
            prop_assert_eq!(total(&spec), Rational::one());
        }

        #[test]
        fn hypergeometric_sums_and_mean(pop in 1u64..=60, s in 0u64..=60, d in 0u64..=60) {
            prop_assume!(s <= pop && d <= pop);
            let spec = DistributionSpec::Hypergeometric { population: pop, successes: s, draws: d };
            prop_assert_eq!(total(&spec), Rational::one());
            let mean: Rational = spec.support().unwrap().into_iter().map(|o| {
                let k = match &o { Outcome::Count(k) => *k, _ => unreachable!() };
                Rational::from(k) * spec.pmf(o).unwrap().into_value()
            }).sum();
            prop_assert_eq!(mean, Rational::new(d * s, pop));
        }

        #[test]
        fn multivariate_sums(a in 0u64..=12, b in 0u64..=12, c in 0u64..=12, d in 0u64..=36) {
            prop_assume!(d <= a + b + c);
            let spec = DistributionSpec::MultivariateHypergeometric { counts: vec![a, b, c], draws: d };
            prop_assert_eq!(total(&spec), Rational::one());
        }

        #[test]
        fn geometric_ratio(a in 1i64..=20, b in 1i64..=20, k in 1i64..40) {
            prop_assume!(a <= b);
            let p = ratio(a, b);
            let spec = DistributionSpec::Geometric { p: p.clone() };
            let next = spec.pmf(k + 1).unwrap().into_value();
            let cur = spec.pmf(k).unwrap().into_value();
            prop_assert_eq!(next, (Rational::one() - p) * cur);
        }
    }
}
