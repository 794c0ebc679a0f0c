//! American roulette: the 38-pocket wheel, m-number bets, and the
//! biased-wheel frequency test.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};
use crate::wager::PayoffDistribution;

pub const POCKETS: u8 = 38;

/// A pocket: 0..=36, with 37 standing for 00.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pocket(u8);

impl Pocket {
    pub const ZERO: Pocket = Pocket(0);
    pub const DOUBLE_ZERO: Pocket = Pocket(37);

    pub fn number(n: u8) -> Result<Pocket> {
        if (1..=36).contains(&n) || n == 0 {
            Ok(Pocket(n))
        } else {
            Err(Error::IllegalSubset(format!("no pocket {n}")))
        }
    }

    pub fn all() -> impl Iterator<Item = Pocket> {
        (0..POCKETS).map(Pocket)
    }

    /// The numeric value, `None` for 0 and 00.
    pub fn value(self) -> Option<u8> {
        (1..=36).contains(&self.0).then_some(self.0)
    }

    pub fn is_red(self) -> bool {
        const RED: [u8; 18] = [1, 3, 5, 7, 9, 12, 14, 16, 18, 19, 21, 23, 25, 27, 30, 32, 34, 36];
        RED.contains(&self.0)
    }

    pub fn is_black(self) -> bool {
        self.value().is_some() && !self.is_red()
    }
}

impl fmt::Display for Pocket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 37 {
            f.write_str("00")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Pocket {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "00" => Ok(Pocket::DOUBLE_ZERO),
            t => {
                let n: u8 = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad pocket {t:?}")))?;
                Pocket::number(n)
            }
        }
    }
}

impl Serialize for Pocket {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Bet sizes the layout permits.
pub const PERMITTED_SIZES: [usize; 9] = [1, 2, 3, 4, 5, 6, 12, 18, 24];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouletteBet {
    pub numbers: BTreeSet<Pocket>,
    pub size: Rational,
}

fn five_number_set() -> BTreeSet<Pocket> {
    [0u8, 37, 1, 2, 3].into_iter().map(Pocket).collect()
}

impl RouletteBet {
    pub fn new(numbers: impl IntoIterator<Item = Pocket>, size: Rational) -> Result<Self> {
        let numbers: BTreeSet<Pocket> = numbers.into_iter().collect();
        let m = numbers.len();
        if !PERMITTED_SIZES.contains(&m) {
            return Err(Error::IllegalSubset(format!("{m}-number bets are not offered")));
        }
        if m == 5 && numbers != five_number_set() {
            return Err(Error::IllegalSubset(
                "the only 5-number bet is 0, 00, 1, 2, 3".into(),
            ));
        }
        if !size.is_positive() {
            return Err(Error::IllegalSubset(format!("bet size {size} must be positive")));
        }
        Ok(RouletteBet { numbers, size })
    }

    pub fn parse_numbers(s: &str) -> Result<Vec<Pocket>> {
        s.split(',').map(str::parse).collect()
    }

    pub fn m(&self) -> usize {
        self.numbers.len()
    }

    /// Payoff odds `X to 1`: 36/m − 1, except the 5-number bet pays 6.
    pub fn payoff_odds(&self) -> Rational {
        let m = self.m() as i64;
        if m == 5 {
            Rational::from(6)
        } else {
            ratio(36, m) - Rational::one()
        }
    }

    /// The rate 36/m − 1 at which a portfolio of single-number bets pays on
    /// these m numbers; equals `payoff_odds` except for the 5-number bet.
    pub fn proper_odds(&self) -> Rational {
        ratio(36, self.m() as i64) - Rational::one()
    }

    pub fn net_payoff(&self, pocket: Pocket) -> Rational {
        if self.numbers.contains(&pocket) {
            self.payoff_odds() * &self.size
        } else {
            -&self.size
        }
    }

    pub fn distribution(&self) -> PayoffDistribution {
        let m = self.m() as i64;
        PayoffDistribution::new(
            format!("{m}-number bet"),
            vec![
                (self.payoff_odds() * &self.size, ratio(m, 38)),
                (-&self.size, ratio(38 - m, 38)),
            ],
        )
        .expect("probabilities sum to 1")
    }

    /// The equivalent portfolio of single-number bets.
    pub fn decompose(&self) -> Vec<RouletteBet> {
        let each = &self.size / Rational::from(self.m());
        self.numbers
            .iter()
            .map(|&p| RouletteBet { numbers: [p].into(), size: each.clone() })
            .collect()
    }
}

pub fn bet_distribution(b: &RouletteBet) -> PayoffDistribution {
    b.distribution()
}

/// Combined net payoff of simultaneous bets on one spin.
pub fn portfolio_payoff(bets: &[RouletteBet], pocket: Pocket) -> Rational {
    bets.iter().map(|b| b.net_payoff(pocket)).sum()
}

/// Distribution of the total profit from simultaneous bets, by enumerating
/// the 38 pockets.
pub fn combined_distribution(bets: &[RouletteBet]) -> PayoffDistribution {
    let atoms = Pocket::all()
        .map(|p| (portfolio_payoff(bets, p), ratio(1, 38)))
        .collect();
    PayoffDistribution::new("combined", atoms).expect("uniform").merged()
}

pub fn black() -> Vec<Pocket> {
    Pocket::all().filter(|p| p.is_black()).collect()
}

pub fn red() -> Vec<Pocket> {
    Pocket::all().filter(|p| p.is_red()).collect()
}

/// Column 1, 2 or 3 of the layout.
pub fn column(c: u8) -> Vec<Pocket> {
    Pocket::all()
        .filter(|p| p.value().is_some_and(|v| (v - 1) % 3 + 1 == c))
        .collect()
}

/// One unit on black plus one unit on the third column.
pub fn cuban_system() -> Vec<RouletteBet> {
    vec![
        RouletteBet::new(black(), Rational::one()).unwrap(),
        RouletteBet::new(column(3), Rational::one()).unwrap(),
    ]
}

/// Named choices of the constant `c` in the biased-wheel criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasPreset {
    Ethier05,
    Ethier20,
    Epstein05,
    Epstein20,
}

impl BiasPreset {
    pub fn c(self) -> Rational {
        match self {
            BiasPreset::Ethier05 => ratio(49, 100),
            BiasPreset::Ethier20 => ratio(41, 100),
            BiasPreset::Epstein05 => ratio(48, 100),
            BiasPreset::Epstein20 => ratio(40, 100),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BiasPreset::Ethier05 => "ethier_05",
            BiasPreset::Ethier20 => "ethier_20",
            BiasPreset::Epstein05 => "epstein_05",
            BiasPreset::Epstein20 => "epstein_20",
        }
    }
}

impl FromStr for BiasPreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ethier_05" => Ok(BiasPreset::Ethier05),
            "ethier_20" => Ok(BiasPreset::Ethier20),
            "epstein_05" => Ok(BiasPreset::Epstein05),
            "epstein_20" => Ok(BiasPreset::Epstein20),
            _ => Err(Error::Parse(format!("unknown preset {s:?}"))),
        }
    }
}

/// The critical count `n/base + c√n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalValue {
    pub spins: u64,
    pub base: u64,
    pub c: Rational,
    /// Exact when `n` is a perfect square, else accurate to `digits` decimals.
    pub value: Rational,
    pub exact: bool,
}

impl CriticalValue {
    /// Whether `count` exceeds the critical value, decided exactly even
    /// when √n is irrational.
    pub fn exceeded_by(&self, count: u64) -> bool {
        let lhs = Rational::from(count) - Rational::new(self.spins, self.base);
        if !lhs.is_positive() {
            return false;
        }
        &lhs * &lhs > &self.c * &self.c * Rational::from(self.spins)
    }
}

fn critical(n: u64, base: u64, c: &Rational, digits: usize) -> Result<CriticalValue> {
    if n == 0 {
        return Err(Error::InvalidParameters("need at least one spin".into()));
    }
    if c.is_negative() {
        return Err(Error::InvalidParameters(format!("c = {c} must be nonnegative")));
    }
    let root = Rational::from(n);
    let exact = root.exact_sqrt().is_some();
    let value = Rational::new(n, base) + c * root.sqrt_approx(digits)?;
    Ok(CriticalValue { spins: n, base, c: c.clone(), value, exact })
}

/// `n/36 + c√n`.
pub fn biased_wheel_critical(n: u64, c: &Rational, digits: usize) -> Result<CriticalValue> {
    critical(n, 36, c, digits)
}

/// The three-standard-deviation variant `n/38 + c√n`, usually with c = 0.48.
pub fn biased_wheel_critical_38(n: u64, c: &Rational, digits: usize) -> Result<CriticalValue> {
    critical(n, 38, c, digits)
}

/// Caveat attached to every verdict of the frequency test.
pub const BIAS_CAVEAT: &str = "valid only if the tested number was chosen before the spins were observed; \
     testing the most frequent number after the fact requires the critical value for the maximum of 38 counts";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_m_number_bets_lose_one_nineteenth() {
        let pockets: Vec<Pocket> = (1..=36).map(|n| Pocket::number(n).unwrap()).collect();
        for m in [1usize, 2, 3, 4, 6, 12, 18, 24] {
            let b = RouletteBet::new(pockets[..m].to_vec(), Rational::one()).unwrap();
            assert_eq!(b.distribution().expectation(), ratio(-1, 19), "m = {m}");
        }
        let five = RouletteBet::new(five_number_set(), Rational::one()).unwrap();
        assert_eq!(five.distribution().expectation(), ratio(-3, 38));
    }

    #[test]
    fn illegal_bets() {
        let p = |v: &[u8]| v.iter().map(|&n| Pocket::number(n).unwrap()).collect::<Vec<_>>();
        assert!(RouletteBet::new(p(&[1, 2, 3, 4, 5]), Rational::one()).is_err());
        assert!(RouletteBet::new(p(&[1, 2, 3, 4, 5, 6, 7]), Rational::one()).is_err());
        assert!(RouletteBet::new(p(&[1]), Rational::zero()).is_err());
        assert!(Pocket::number(37).is_err());
    }

    #[test]
    fn decomposition_pocket_by_pocket() {
        let nums = RouletteBet::parse_numbers("0,00,1,2,3").unwrap();
        let five = RouletteBet::new(nums, Rational::from(5)).unwrap();
        let parts = five.decompose();
        assert_eq!(parts.len(), 5);
        assert!(parts.iter().all(|b| b.size == Rational::one()));
        for p in Pocket::all() {
            // The portfolio pays 6.2 to 1 on the whole stake.
            assert_eq!(five.proper_odds(), ratio(31, 5));
            let fair = if five.numbers.contains(&p) { five.proper_odds() * Rational::from(5) } else { Rational::from(-5) };
            assert_eq!(portfolio_payoff(&parts, p), fair);
        }
        let twelve = RouletteBet::new(column(2), Rational::from(12)).unwrap();
        let parts = twelve.decompose();
        assert_eq!(parts.len(), 12);
        for p in Pocket::all() {
            assert_eq!(portfolio_payoff(&parts, p), twelve.net_payoff(p));
        }
        let single = RouletteBet::new([Pocket::ZERO], Rational::one()).unwrap();
        assert_eq!(single.decompose(), vec![single.clone()]);
    }

    #[test]
    fn cuban_system() {
        let bets = super::cuban_system();
        let black_col3: Vec<u8> = column(3)
            .into_iter()
            .filter(|p| p.is_black())
            .filter_map(Pocket::value)
            .collect();
        assert_eq!(black_col3, vec![6, 15, 24, 33]);
        let d = combined_distribution(&bets);
        assert_eq!(d.expectation(), ratio(-2, 19));
        let expect = PayoffDistribution::new(
            "",
            vec![
                (Rational::from(3), ratio(4, 38)),
                (Rational::from(1), ratio(8, 38)),
                (Rational::from(0), ratio(14, 38)),
                (Rational::from(-2), ratio(12, 38)),
            ],
        )
        .unwrap()
        .merged();
        assert_eq!(d.atoms, expect.atoms);
    }

    #[test]
    fn critical_values() {
        let cv = biased_wheel_critical(3600, &ratio(49, 100), 10).unwrap();
        assert!(cv.exact);
        assert_eq!(cv.value, ratio(1294, 10));
        assert!(cv.exceeded_by(130));
        assert!(!cv.exceeded_by(129));
        let cv = biased_wheel_critical(36, &Rational::zero(), 10).unwrap();
        assert_eq!(cv.value, Rational::one());
        let cv = biased_wheel_critical_38(3800, &BiasPreset::Epstein05.c(), 12).unwrap();
        assert!(!cv.exact);
        let expect = 100.0 + 0.48 * 3800f64.sqrt();
        assert!((cv.value.to_f64() - expect).abs() < 1e-9);
        assert!(cv.exceeded_by(130));
        assert!(!cv.exceeded_by(129));
    }
}
