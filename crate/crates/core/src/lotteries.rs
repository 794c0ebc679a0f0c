//! Keno catch probabilities, way tickets, and Lotto 6/49 prize categories.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::combin::{binomial, multinomial};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const KENO_POOL: u64 = 80;
pub const KENO_DRAWN: u64 = 20;
pub const KENO_MAX_SPOTS: u64 = 15;

/// Player's-ticket form: `C(spots,k) C(pool−spots, drawn−k) / C(pool, drawn)`.
pub fn keno_catch_ticket_form(pool: u64, drawn: u64, spots: u64, k: u64) -> Rational {
    binomial(spots, k as i64) * binomial(pool - spots, drawn as i64 - k as i64)
        / binomial(pool, drawn as i64)
}

/// Drawn-numbers form: `C(drawn,k) C(pool−drawn, spots−k) / C(pool, spots)`.
pub fn keno_catch_draw_form(pool: u64, drawn: u64, spots: u64, k: u64) -> Rational {
    binomial(drawn, k as i64) * binomial(pool - drawn, spots as i64 - k as i64)
        / binomial(pool, spots as i64)
}

/// Probability of exactly `catches` on a `spots`-spot ticket with a general
/// pool; both forms are computed and must agree.
pub fn keno_catch_in(pool: u64, drawn: u64, spots: u64, catches: u64) -> Result<Rational> {
    if spots == 0 || spots > pool || drawn > pool {
        return Err(Error::InvalidTicket(format!(
            "{spots} spots with {drawn} of {pool} drawn"
        )));
    }
    if catches > spots.min(drawn) {
        return Err(Error::InvalidTicket(format!(
            "{catches} catches on a {spots}-spot ticket"
        )));
    }
    let a = keno_catch_ticket_form(pool, drawn, spots, catches);
    let b = keno_catch_draw_form(pool, drawn, spots, catches);
    assert_eq!(a, b, "keno forms disagree at spots={spots} catches={catches}");
    Ok(a)
}

/// Standard 80-ball, 20-drawn keno.
pub fn keno_catch(spots: u64, catches: u64) -> Result<Rational> {
    if spots > KENO_MAX_SPOTS {
        return Err(Error::InvalidTicket(format!("at most {KENO_MAX_SPOTS} spots")));
    }
    keno_catch_in(KENO_POOL, KENO_DRAWN, spots, catches)
}

/// A way ticket: `r` disjoint groups of `s` numbers, one unit on each union
/// of `t` groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WayTicket {
    pub r: u64,
    pub s: u64,
    pub t: u64,
}

impl WayTicket {
    pub fn new(r: u64, s: u64, t: u64) -> Result<Self> {
        Self::new_in(KENO_POOL, r, s, t)
    }

    pub fn new_in(pool: u64, r: u64, s: u64, t: u64) -> Result<Self> {
        if r == 0 || s == 0 || t == 0 || t > r || r * s > pool || s * t > KENO_MAX_SPOTS {
            return Err(Error::InvalidWayTicket(format!("(r, s, t) = ({r}, {s}, {t})")));
        }
        Ok(WayTicket { r, s, t })
    }

    pub fn spots_per_way(&self) -> u64 {
        self.s * self.t
    }
}

pub fn way_ticket_count(w: &WayTicket) -> u64 {
    crate::combin::choose(w.r, w.t as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WayTicketEv {
    pub ways: u64,
    pub total_bet: Rational,
    /// Expected gross payout across all ways.
    pub expected_payout: Rational,
    pub expected_profit: Rational,
}

/// Expected payout of a way ticket; `paytable` maps catches to the gross
/// return per unit bet on one way. Missing entries pay nothing.
pub fn way_ticket_ev_in(
    pool: u64,
    drawn: u64,
    w: &WayTicket,
    paytable: &BTreeMap<u64, Rational>,
    unit: &Rational,
) -> Result<WayTicketEv> {
    let spots = w.spots_per_way();
    if let Some(k) = paytable.keys().find(|&&k| k > spots) {
        return Err(Error::InvalidPaytable(format!(
            "{k} catches impossible on a {spots}-spot way"
        )));
    }
    let single: Rational = paytable
        .iter()
        .filter(|(&k, _)| k <= drawn)
        .map(|(&k, pay)| keno_catch_in(pool, drawn, spots, k).map(|p| p * pay))
        .sum::<Result<Rational>>()?;
    let ways = way_ticket_count(w);
    let total_bet = Rational::from(ways) * unit;
    let expected_payout = &single * &total_bet;
    Ok(WayTicketEv {
        ways,
        expected_profit: &expected_payout - &total_bet,
        total_bet,
        expected_payout,
    })
}

pub fn way_ticket_ev(
    w: &WayTicket,
    paytable: &BTreeMap<u64, Rational>,
    unit: &Rational,
) -> Result<WayTicketEv> {
    way_ticket_ev_in(KENO_POOL, KENO_DRAWN, w, paytable, unit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum LottoCategory {
    #[serde(rename = "6/6")]
    Six,
    #[serde(rename = "5/6+bonus")]
    FivePlusBonus,
    #[serde(rename = "5/6")]
    Five,
    #[serde(rename = "4/6")]
    Four,
    #[serde(rename = "3/6")]
    Three,
    #[serde(rename = "2/6+bonus")]
    TwoPlusBonus,
}

impl LottoCategory {
    pub const ALL: [LottoCategory; 6] = [
        LottoCategory::Six,
        LottoCategory::FivePlusBonus,
        LottoCategory::Five,
        LottoCategory::Four,
        LottoCategory::Three,
        LottoCategory::TwoPlusBonus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            LottoCategory::Six => "6/6",
            LottoCategory::FivePlusBonus => "5/6+bonus",
            LottoCategory::Five => "5/6",
            LottoCategory::Four => "4/6",
            LottoCategory::Three => "3/6",
            LottoCategory::TwoPlusBonus => "2/6+bonus",
        }
    }

    /// (main-number matches, bonus matches) cells making up the category.
    fn cells(self) -> &'static [(u64, u64)] {
        match self {
            LottoCategory::Six => &[(6, 0)],
            LottoCategory::FivePlusBonus => &[(5, 1)],
            LottoCategory::Five => &[(5, 0)],
            LottoCategory::Four => &[(4, 0), (4, 1)],
            LottoCategory::Three => &[(3, 0), (3, 1)],
            LottoCategory::TwoPlusBonus => &[(2, 1)],
        }
    }
}

const PICKS: u64 = 6;
const LOTTO_POOL: u64 = 49;

/// Both the player's six numbers and the other 43 are split into
/// (winning, bonus, neither), over all splits of the 49 into 6, 1, 42.
fn lotto_trinomial(k: u64, b: u64) -> Rational {
    let rest = PICKS - k - b;
    let others = LOTTO_POOL - PICKS;
    let mine = multinomial(PICKS, &[k, b, rest]).unwrap();
    let theirs = multinomial(others, &[PICKS - k, 1 - b, others - (PICKS - k) - (1 - b)]).unwrap();
    mine * theirs / multinomial(LOTTO_POOL, &[PICKS, 1, LOTTO_POOL - PICKS - 1]).unwrap()
}

/// The player's six numbers drawn against the lottery's 6 + 1 + 42 split.
fn lotto_simple(k: u64, b: u64) -> Rational {
    binomial(6, k as i64) * binomial(1, b as i64) * binomial(42, (PICKS - k - b) as i64)
        / binomial(LOTTO_POOL, PICKS as i64)
}

pub fn lotto_649_categories() -> BTreeMap<LottoCategory, Rational> {
    LottoCategory::ALL
        .iter()
        .map(|&c| {
            let a: Rational = c.cells().iter().map(|&(k, b)| lotto_trinomial(k, b)).sum();
            let s: Rational = c.cells().iter().map(|&(k, b)| lotto_simple(k, b)).sum();
            assert_eq!(a, s, "lotto forms disagree for {}", c.label());
            (c, a)
        })
        .collect()
}

/// Probability of winning no prize.
pub fn lotto_649_no_prize() -> Rational {
    Rational::one() - lotto_649_categories().values().sum::<Rational>()
}

/// Equal share of a pari-mutuel pool.
pub fn parimutuel_share(pool: &Rational, winners: u64) -> Result<Rational> {
    if pool.is_negative() {
        return Err(Error::InvalidParameters(format!("negative pool {pool}")));
    }
    if winners == 0 {
        return Err(Error::NoWinners);
    }
    Ok(pool / Rational::from(winners))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn keno() {
        assert_eq!(keno_catch(10, 6).unwrap(), ratio(24_869_385, 2_166_436_987));
        assert_eq!(keno_catch(1, 1).unwrap(), ratio(1, 4));
        assert_eq!(
            keno_catch(10, 0).unwrap(),
            binomial(70, 20) / binomial(80, 20)
        );
        assert!(keno_catch(16, 1).is_err());
        assert!(keno_catch(4, 5).is_err());
        for spots in 1..=15 {
            let total: Rational = (0..=spots).map(|k| keno_catch(spots, k).unwrap()).sum();
            assert_eq!(total, Rational::one());
        }
    }

    #[test]
    fn way_counts() {
        assert_eq!(way_ticket_count(&WayTicket::new(20, 4, 2).unwrap()), 190);
        assert_eq!(way_ticket_count(&WayTicket::new(10, 2, 5).unwrap()), 252);
        assert_eq!(way_ticket_count(&WayTicket::new(7, 2, 7).unwrap()), 1);
        assert!(WayTicket::new(20, 4, 4).is_err());
        assert!(WayTicket::new(30, 4, 2).is_err());
    }

    #[test]
    fn way_ev_linear_and_zero() {
        let w = WayTicket::new(10, 2, 5).unwrap();
        let zero = way_ticket_ev(&w, &BTreeMap::new(), &Rational::one()).unwrap();
        assert_eq!(zero.expected_payout, Rational::zero());
        let table: BTreeMap<u64, Rational> =
            [(5, 2), (6, 20), (10, 10000)].into_iter().map(|(k, v)| (k, Rational::from(v))).collect();
        let one = way_ticket_ev(&w, &table, &Rational::one()).unwrap();
        let three = way_ticket_ev(&w, &table, &Rational::from(3)).unwrap();
        assert_eq!(three.expected_payout, one.expected_payout * Rational::from(3));
    }

    /// Brute force over every draw of 4 from 10 with three groups of two.
    #[test]
    fn way_ev_toy_pool() {
        let (pool, drawn) = (10u64, 4u64);
        let w = WayTicket::new_in(pool, 3, 2, 2).unwrap();
        let table: BTreeMap<u64, Rational> =
            [(2, 1), (3, 5), (4, 40)].into_iter().map(|(k, v)| (k, Rational::from(v))).collect();
        let groups = [[0u32, 1], [2, 3], [4, 5]];
        let mut total = Rational::zero();
        let mut draws = 0u64;
        for mask in 0u32..(1 << pool) {
            if mask.count_ones() as u64 != drawn {
                continue;
            }
            draws += 1;
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let caught = groups[a]
                    .iter()
                    .chain(&groups[b])
                    .filter(|&&n| mask & (1 << n) != 0)
                    .count() as u64;
                if let Some(p) = table.get(&caught) {
                    total += p;
                }
            }
        }
        let brute = total / Rational::from(draws);
        let ev = way_ticket_ev_in(pool, drawn, &w, &table, &Rational::one()).unwrap();
        assert_eq!(ev.expected_payout, brute);
    }

    #[test]
    fn lotto() {
        let c = lotto_649_categories();
        let recip = |k: LottoCategory| c[&k].recip().to_decimal(1);
        assert_eq!(recip(LottoCategory::Six), "13983816.0");
        assert_eq!(recip(LottoCategory::FivePlusBonus), "2330636.0");
        assert_eq!(recip(LottoCategory::Five), "55491.3");
        assert_eq!(recip(LottoCategory::Four), "1032.4");
        assert_eq!(recip(LottoCategory::Three), "56.7");
        assert_eq!(recip(LottoCategory::TwoPlusBonus), "81.2");
        let all: Rational = c.values().sum::<Rational>() + lotto_649_no_prize();
        assert_eq!(all, Rational::one());
    }

    #[test]
    fn parimutuel() {
        assert_eq!(
            parimutuel_share(&ratio(399_418_800, 100), 1).unwrap().to_decimal(2),
            "3994188.00"
        );
        let pool = ratio(119_370, 100) * Rational::from(239);
        assert_eq!(parimutuel_share(&pool, 239).unwrap().to_decimal(2), "1193.70");
        assert_eq!(parimutuel_share(&pool, 0), Err(Error::NoWinners));
    }
}
