//! Payoff distributions and house-advantage conventions.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub payoff: Rational,
    pub prob: Rational,
}

/// Net payoffs per unit staked, with exact probabilities summing to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PayoffDistribution {
    pub label: String,
    pub atoms: Vec<Atom>,
}

impl PayoffDistribution {
    pub fn new(label: impl Into<String>, atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|(payoff, prob)| Atom { payoff, prob })
            .collect();
        if let Some(a) = atoms.iter().find(|a| a.prob.is_negative()) {
            return Err(Error::InvalidParameters(format!(
                "negative probability {} for payoff {}",
                a.prob, a.payoff
            )));
        }
        let total: Rational = atoms.iter().map(|a| &a.prob).sum();
        if !total.is_one() {
            return Err(Error::InvalidParameters(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(PayoffDistribution { label: label.into(), atoms })
    }

    pub fn degenerate(label: impl Into<String>, payoff: Rational) -> Self {
        PayoffDistribution {
            label: label.into(),
            atoms: vec![Atom { payoff, prob: Rational::one() }],
        }
    }

    pub fn expectation(&self) -> Rational {
        self.atoms.iter().map(|a| &a.payoff * &a.prob).sum()
    }

    pub fn second_moment(&self) -> Rational {
        self.atoms.iter().map(|a| &a.payoff * &a.payoff * &a.prob).sum()
    }

    pub fn variance(&self) -> Rational {
        let m = self.expectation();
        self.second_moment() - &m * &m
    }

    /// Standard deviation as a decimal string.
    pub fn sd_decimal(&self, digits: usize) -> String {
        self.variance()
            .sqrt_decimal(digits)
            .expect("variance is nonnegative")
    }

    /// Probability of a zero net payoff.
    pub fn push_probability(&self) -> Rational {
        self.atoms
            .iter()
            .filter(|a| a.payoff.is_zero())
            .map(|a| &a.prob)
            .sum()
    }

    /// Combines atoms with equal payoffs, drops null atoms, and sorts by payoff.
    pub fn merged(&self) -> Self {
        let mut m: BTreeMap<Rational, Rational> = BTreeMap::new();
        for a in &self.atoms {
            *m.entry(a.payoff.clone()).or_default() += &a.prob;
        }
        PayoffDistribution {
            label: self.label.clone(),
            atoms: m
                .into_iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(payoff, prob)| Atom { payoff, prob })
                .collect(),
        }
    }

    /// Scales every payoff by `k` (a bet of `k` units).
    pub fn scaled(&self, k: &Rational) -> Self {
        PayoffDistribution {
            label: self.label.clone(),
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom { payoff: &a.payoff * k, prob: a.prob.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pushes {
    Include,
    Exclude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Denominator {
    Initial,
    ExpectedTotal,
    AtRisk,
}

/// A wager's expected profit together with the bet sizes used to normalize it.
///
/// `payoff` is present when the full distribution is known; profiles built
/// from published summary figures carry only the expectation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WagerProfile {
    pub payoff: Option<PayoffDistribution>,
    pub expectation: Rational,
    pub initial_bet: Rational,
    pub expected_total_bet: Rational,
    pub amount_at_risk: Rational,
    pub push_probability: Rational,
}

impl WagerProfile {
    /// Profile of a single fixed stake whose net payoffs are in `payoff`.
    pub fn simple(payoff: PayoffDistribution, bet: Rational) -> Self {
        let expectation = payoff.expectation() * &bet;
        let push_probability = payoff.push_probability();
        WagerProfile {
            payoff: Some(payoff.scaled(&bet)),
            expectation,
            initial_bet: bet.clone(),
            expected_total_bet: bet.clone(),
            amount_at_risk: bet,
            push_probability,
        }
    }

    pub fn from_summary(
        expectation: Rational,
        initial_bet: Rational,
        expected_total_bet: Rational,
        amount_at_risk: Rational,
        push_probability: Rational,
    ) -> Result<Self> {
        let p = WagerProfile {
            payoff: None,
            expectation,
            initial_bet,
            expected_total_bet,
            amount_at_risk,
            push_probability,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.amount_at_risk > self.initial_bet || self.initial_bet > self.expected_total_bet {
            return Err(Error::InvalidParameters(format!(
                "need at-risk ({}) <= initial ({}) <= expected total ({})",
                self.amount_at_risk, self.initial_bet, self.expected_total_bet
            )));
        }
        if !self.push_probability.is_probability() {
            return Err(Error::InvalidParameters(format!(
                "push probability {} outside [0, 1]",
                self.push_probability
            )));
        }
        if !self.amount_at_risk.is_positive() {
            return Err(Error::InvalidParameters("bet sizes must be positive".into()));
        }
        Ok(())
    }

    pub fn with_amount_at_risk(mut self, at_risk: Rational) -> Result<Self> {
        self.amount_at_risk = at_risk;
        self.validate()?;
        Ok(self)
    }

    /// Expected loss over the chosen bet size; positive favors the house.
    pub fn house_advantage(&self, pushes: Pushes, denominator: Denominator) -> Result<Rational> {
        let loss = -&self.expectation;
        let loss = match pushes {
            Pushes::Include => loss,
            Pushes::Exclude => {
                let live = Rational::one() - &self.push_probability;
                if live.is_zero() {
                    return Err(Error::DegeneratePushOnly);
                }
                loss / live
            }
        };
        let d = match denominator {
            Denominator::Initial => &self.initial_bet,
            Denominator::ExpectedTotal => &self.expected_total_bet,
            Denominator::AtRisk => &self.amount_at_risk,
        };
        Ok(loss / d)
    }
}

/// Odds against an event of probability `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Odds {
    /// `against : for`, in lowest integer terms.
    #[serde(serialize_with = "display")]
    pub against: BigInt,
    #[serde(rename = "for", serialize_with = "display")]
    pub for_: BigInt,
    /// Fair payoff per unit, `1/p - 1`.
    pub to_one: Rational,
}

impl Odds {
    /// "X to 1" with X written exactly (a finite decimal when possible).
    pub fn fair_payoff_text(&self) -> String {
        format!("{} to 1", exact_text(&self.to_one))
    }
}

pub fn odds_convert(p: &Rational) -> Result<Odds> {
    if !p.is_open_unit() {
        return Err(Error::InvalidProbability(p.to_string()));
    }
    let against = Rational::one() - p;
    // (1-p) : p = (d-n) : n with p = n/d
    let n = p.numer().clone();
    let a = against.numer() * p.denom() / against.denom();
    let g = a.gcd(&n);
    Ok(Odds {
        against: &a / &g,
        for_: &n / &g,
        to_one: against / p,
    })
}

fn display<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Finite decimal expansion when one exists, else `p/q`.
pub fn exact_text(r: &Rational) -> String {
    let mut d = r.denom().clone();
    let mut exps = [0usize; 2];
    for (i, f) in [2u32, 5].into_iter().enumerate() {
        while (&d % f).is_zero() {
            d /= f;
            exps[i] += 1;
        }
    }
    if d.is_one() {
        r.to_decimal(exps[0].max(exps[1]))
    } else {
        r.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn dist(atoms: &[(i64, i64, i64)]) -> PayoffDistribution {
        PayoffDistribution::new(
            "t",
            atoms.iter().map(|&(x, n, d)| (Rational::from(x), ratio(n, d))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn expectations() {
        let single = dist(&[(35, 1, 38), (-1, 37, 38)]);
        assert_eq!(single.expectation(), ratio(-1, 19));
        let var: Rational = Rational::from(35 * 35) * ratio(1, 38) + ratio(37, 38)
            - ratio(1, 19) * ratio(1, 19);
        assert_eq!(single.variance(), var);
        let cuban = dist(&[(3, 4, 38), (1, 8, 38), (0, 14, 38), (-2, 12, 38)]);
        assert_eq!(cuban.expectation(), ratio(-2, 19));
        assert_eq!(PayoffDistribution::degenerate("z", Rational::zero()).expectation(), Rational::zero());
        assert_eq!(PayoffDistribution::degenerate("c", Rational::from(7)).variance(), Rational::zero());
        assert_eq!(dist(&[(1, 1, 2), (-1, 1, 2)]).variance(), Rational::one());
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(PayoffDistribution::new("x", vec![(Rational::one(), ratio(1, 2))]).is_err());
        assert!(PayoffDistribution::new(
            "x",
            vec![(Rational::one(), ratio(3, 2)), (Rational::zero(), ratio(-1, 2))]
        )
        .is_err());
    }

    #[test]
    fn three_card_poker_conventions() {
        let p = WagerProfile::from_summary(
            ratio(-686_689, 20_358_520),
            Rational::one(),
            ratio(34_084_400, 20_358_520),
            Rational::one(),
            Rational::zero(),
        )
        .unwrap();
        let init = p.house_advantage(Pushes::Include, Denominator::Initial).unwrap();
        let total = p.house_advantage(Pushes::Include, Denominator::ExpectedTotal).unwrap();
        assert_eq!(init.to_decimal(7), "0.0337298");
        assert_eq!(total, ratio(686_689, 34_084_400));
        assert_eq!(total.to_decimal(7), "0.0201467");
    }

    #[test]
    fn at_risk_denominator() {
        let p = WagerProfile::from_summary(
            Rational::from(-1),
            Rational::from(5),
            Rational::from(5),
            Rational::from(4),
            Rational::zero(),
        )
        .unwrap();
        assert_eq!(p.house_advantage(Pushes::Include, Denominator::Initial).unwrap(), ratio(1, 5));
        assert_eq!(p.house_advantage(Pushes::Include, Denominator::AtRisk).unwrap(), ratio(1, 4));
        assert!(p.clone().with_amount_at_risk(Rational::from(6)).is_err());
    }

    #[test]
    fn push_only_cannot_exclude() {
        let w = WagerProfile::simple(PayoffDistribution::degenerate("p", Rational::zero()), Rational::one());
        assert_eq!(w.house_advantage(Pushes::Exclude, Denominator::Initial), Err(Error::DegeneratePushOnly));
    }

    #[test]
    fn odds() {
        let o = odds_convert(&ratio(1, 2)).unwrap();
        assert_eq!((o.against.clone(), o.for_.clone()), (BigInt::from(1), BigInt::from(1)));
        assert_eq!(o.fair_payoff_text(), "1 to 1");
        let o = odds_convert(&ratio(5, 38)).unwrap();
        assert_eq!((o.against.clone(), o.for_.clone()), (BigInt::from(33), BigInt::from(5)));
        assert_eq!(o.fair_payoff_text(), "6.6 to 1");
        let o = odds_convert(&ratio(1, 38)).unwrap();
        assert_eq!(o.to_one, Rational::from(37));
        assert_eq!(odds_convert(&ratio(3, 7)).unwrap().fair_payoff_text(), "4/3 to 1");
        assert!(odds_convert(&Rational::one()).is_err());
    }

    fn arb_dist() -> impl Strategy<Value = PayoffDistribution> {
        proptest::collection::vec((-5i64..=5, 1i64..=9), 1..8).prop_map(|v| {
            let total: i64 = v.iter().map(|x| x.1).sum();
            PayoffDistribution::new(
                "r",
                v.into_iter().map(|(x, w)| (Rational::from(x), ratio(w, total))).collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn merge_and_reorder_preserve_moments(d in arb_dist()) {
            let m = d.merged();
            prop_assert_eq!(m.expectation(), d.expectation());
            prop_assert_eq!(m.variance(), d.variance());
            let mut r = d.clone();
            r.atoms.reverse();
            prop_assert_eq!(r.expectation(), d.expectation());
            prop_assert_eq!(r.variance(), d.variance());
        }

        #[test]
        fn house_advantage_identities(d in arb_dist(), bet in 1i64..10) {
            let bet = Rational::from(bet);
            let w = WagerProfile::simple(d.clone(), bet.clone());
            let ha = w.house_advantage(Pushes::Include, Denominator::Initial).unwrap();
            prop_assert_eq!(&ha * &bet, -(d.expectation() * &bet));
            let r = w.push_probability.clone();
            if r < Rational::one() {
                let ex = w.house_advantage(Pushes::Exclude, Denominator::Initial).unwrap();
                prop_assert_eq!(ex, ha / (Rational::one() - r));
            }
        }
    }
}
