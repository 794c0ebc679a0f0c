//! Jacks or Better video poker: exact hold expectations and full-game
//! analysis under optimal play.

use std::collections::{BTreeMap, BTreeSet};

use num::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cards::{check_distinct, eval_mask, five_card_classes, Card, Category, HandValue};
use crate::combin::choose;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Payout classes: the poker categories with one pair split at jacks.
pub const CLASSES: usize = 11;
const LOW_PAIR: usize = 1;
const ROYAL: usize = 10;

pub const CLASS_NAMES: [&str; CLASSES] = [
    "nothing",
    "low pair",
    "jacks or better",
    "two pair",
    "three of a kind",
    "straight",
    "flush",
    "full house",
    "four of a kind",
    "straight flush",
    "royal flush",
];

pub fn pay_class(v: HandValue) -> usize {
    match v.category() {
        Category::HighCard => 0,
        Category::OnePair => {
            // Rank index 9 is the jack.
            if (v.0 >> 16) & 0xF >= 9 {
                2
            } else {
                LOW_PAIR
            }
        }
        Category::TwoPair => 3,
        Category::Trips => 4,
        Category::Straight => 5,
        Category::Flush => 6,
        Category::FullHouse => 7,
        Category::Quads => 8,
        Category::StraightFlush => 9,
        Category::RoyalFlush => ROYAL,
    }
}

/// Returns per unit bet (gross, "for 1"); unlisted hands return 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PayTable {
    pub name: String,
    pub royal_flush: Rational,
    pub straight_flush: Rational,
    pub four_of_a_kind: Rational,
    pub full_house: Rational,
    pub flush: Rational,
    pub straight: Rational,
    pub three_of_a_kind: Rational,
    pub two_pair: Rational,
    pub jacks_or_better: Rational,
}

impl PayTable {
    fn standard(name: &str, royal: i64, full_house: i64, flush: i64) -> PayTable {
        let r = Rational::from;
        PayTable {
            name: name.to_string(),
            royal_flush: r(royal),
            straight_flush: r(50),
            four_of_a_kind: r(25),
            full_house: r(full_house),
            flush: r(flush),
            straight: r(4),
            three_of_a_kind: r(3),
            two_pair: r(2),
            jacks_or_better: r(1),
        }
    }

    pub fn nine_six() -> PayTable {
        Self::standard("9-6", 800, 9, 6)
    }

    pub fn nine_six_940() -> PayTable {
        Self::standard("9-6-940", 940, 9, 6)
    }

    pub fn eight_five_2500() -> PayTable {
        Self::standard("8-5-2500", 2500, 8, 5)
    }

    pub fn eight_five() -> PayTable {
        Self::standard("8-5", 800, 8, 5)
    }

    pub fn preset(name: &str) -> Result<PayTable> {
        match name {
            "9-6" => Ok(Self::nine_six()),
            "9-6-940" => Ok(Self::nine_six_940()),
            "8-5-2500" => Ok(Self::eight_five_2500()),
            "8-5" => Ok(Self::eight_five()),
            _ => Err(Error::InvalidPaytable(format!(
                "unknown preset {name:?} (have 9-6, 9-6-940, 8-5-2500, 8-5)"
            ))),
        }
    }

    /// Returns indexed by payout class.
    pub fn by_class(&self) -> [Rational; CLASSES] {
        [
            Rational::zero(),
            Rational::zero(),
            self.jacks_or_better.clone(),
            self.two_pair.clone(),
            self.three_of_a_kind.clone(),
            self.straight.clone(),
            self.flush.clone(),
            self.full_house.clone(),
            self.four_of_a_kind.clone(),
            self.straight_flush.clone(),
            self.royal_flush.clone(),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let pays = self.by_class();
        if pays.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidPaytable("negative return".into()));
        }
        for c in 3..CLASSES {
            if pays[c] < pays[c - 1] {
                return Err(Error::InvalidPaytable(format!(
                    "{} pays less than {}",
                    CLASS_NAMES[c],
                    CLASS_NAMES[c - 1]
                )));
            }
        }
        Ok(())
    }

    /// Integer returns and their common denominator.
    fn scaled(&self) -> ([u128; CLASSES], u128) {
        let pays = self.by_class();
        let den = pays.iter().fold(num::BigInt::from(1), |l, p| l.lcm(p.denom()));
        let den_u = u128::try_from(den.clone()).expect("paytable denominator too large");
        let ints = std::array::from_fn(|c| {
            let v = pays[c].numer() * (&den / pays[c].denom());
            u128::try_from(v).expect("paytable entry too large")
        });
        (ints, den_u)
    }
}

/// Least common multiple of C(47, j), j = 0..5, so every hold EV is an
/// integer over it.
pub const LCD: u128 = 7_669_695;

fn completions(k: u32) -> u128 {
    choose(47, 5 - k as i64) as u128
}

const BINOM_ROWS: usize = 53;

/// Counts of five-card hands by payout class containing each subset of at
/// most four cards, indexed in combinatorial number order.
pub struct Analyzer {
    binom: [[u32; 6]; BINOM_ROWS],
    base: [usize; 5],
    counts: Vec<[u32; CLASSES]>,
    bits: [u64; 52],
}

/// Expectations of all 32 holds of one hand, scaled by [`LCD`] and the
/// paytable denominator.
struct HoldTotals {
    ev: [u128; 32],
    second: [u128; 32],
    royal: [u128; 32],
}

impl Default for Analyzer {
    fn default() -> Self {
        Self::new()
    }
}

impl Analyzer {
    pub fn new() -> Analyzer {
        let mut binom = [[0u32; 6]; BINOM_ROWS];
        for (n, row) in binom.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                *v = choose(n as u64, k as i64) as u32;
            }
        }
        let mut base = [0usize; 5];
        for k in 1..5 {
            base[k] = base[k - 1] + binom[52][k - 1] as usize;
        }
        let size = base[4] + binom[52][4] as usize;
        let bits: [u64; 52] = std::array::from_fn(|i| Card::from_index(i as u8).bit());
        let mut a = Analyzer { binom, base, counts: vec![[0; CLASSES]; size], bits };
        for c0 in 0..52 {
            for c1 in c0 + 1..52 {
                for c2 in c1 + 1..52 {
                    for c3 in c2 + 1..52 {
                        for c4 in c3 + 1..52 {
                            let idx = [c0, c1, c2, c3, c4];
                            let m = idx.iter().fold(0, |m, &i| m | a.bits[i]);
                            let class = pay_class(eval_mask(m));
                            for sub in 0..31u32 {
                                let slot = a.subset_index(&idx, sub);
                                a.counts[slot][class] += 1;
                            }
                        }
                    }
                }
            }
        }
        a
    }

    /// Combinatorial-number index of the cards of `hand` (sorted) picked
    /// by `sub`.
    fn subset_index(&self, hand: &[usize; 5], sub: u32) -> usize {
        let mut k = 0;
        let mut off = 0usize;
        for (i, &c) in hand.iter().enumerate() {
            if sub & (1 << i) != 0 {
                k += 1;
                off += self.binom[c][k] as usize;
            }
        }
        self.base[k] + off
    }

    /// Completion counts by payout class for all 32 holds, by
    /// inclusion–exclusion over the discards.
    fn hold_counts(&self, hand: &[usize; 5]) -> [[i64; CLASSES]; 32] {
        let mut arr = [[0i64; CLASSES]; 32];
        for (sub, row) in arr.iter_mut().enumerate().take(31) {
            let n = &self.counts[self.subset_index(hand, sub as u32)];
            for c in 0..CLASSES {
                row[c] = n[c] as i64;
            }
        }
        let m = hand.iter().fold(0, |m, &i| m | self.bits[i]);
        arr[31][pay_class(eval_mask(m))] = 1;
        for b in 0..5 {
            for t in 0..32 {
                if t & (1 << b) == 0 {
                    for c in 0..CLASSES {
                        arr[t][c] -= arr[t | (1 << b)][c];
                    }
                }
            }
        }
        arr
    }

    fn totals(&self, hand: &[usize; 5], pays: &[u128; CLASSES]) -> HoldTotals {
        let counts = self.hold_counts(hand);
        let mut t = HoldTotals { ev: [0; 32], second: [0; 32], royal: [0; 32] };
        for s in 0..32 {
            let k = (s as u32).count_ones();
            let factor = LCD / completions(k);
            debug_assert_eq!(counts[s].iter().sum::<i64>() as u128, completions(k));
            let (mut ev, mut second) = (0u128, 0u128);
            for c in 0..CLASSES {
                let n = counts[s][c] as u128;
                ev += n * pays[c];
                second += n * pays[c] * pays[c];
            }
            t.ev[s] = ev * factor;
            t.second[s] = second * factor;
            t.royal[s] = counts[s][ROYAL] as u128 * factor;
        }
        t
    }

    /// Exact expectation of every hold of `hand`; bit `i` of the index holds
    /// `hand[i]`.
    pub fn hold_evs(&self, hand: &[Card], pt: &PayTable) -> Result<[Rational; 32]> {
        let (sorted, order) = sorted_hand(hand)?;
        let (pays, den) = pt.scaled();
        let t = self.totals(&sorted, &pays);
        let scale = Rational::from(LCD) * Rational::from(den);
        Ok(std::array::from_fn(|user_mask| {
            let s = remap_mask(user_mask as u32, &order);
            Rational::from(t.ev[s as usize]) / &scale
        }))
    }

    /// Optimal-play analysis over the 134,459 suit classes.
    pub fn analyze(&self, pt: &PayTable) -> Result<GameAnalysis> {
        pt.validate()?;
        let (pays, den) = pt.scaled();
        let classes = five_card_classes();
        let acc = classes
            .par_iter()
            .map(|(hand, weight)| {
                let idx: [usize; 5] = std::array::from_fn(|i| hand[i].index() as usize);
                let t = self.totals(&idx, &pays);
                Acc::one(&t, *weight as u128)
            })
            .reduce(Acc::default, Acc::merge);
        Ok(acc.finish(pt, den))
    }
}

fn sorted_hand(hand: &[Card]) -> Result<([usize; 5], [usize; 5])> {
    if hand.len() != 5 {
        return Err(Error::InvalidParameters(format!("{} cards, need 5", hand.len())));
    }
    check_distinct(hand)?;
    let mut order: [usize; 5] = std::array::from_fn(|i| i);
    order.sort_by_key(|&i| hand[i].index());
    let sorted = std::array::from_fn(|j| hand[order[j]].index() as usize);
    Ok((sorted, order))
}

/// Converts a mask over the user's card order into one over sorted order.
fn remap_mask(user: u32, order: &[usize; 5]) -> u32 {
    (0..5).filter(|&j| user & (1 << order[j]) != 0).fold(0, |m, j| m | (1 << j))
}

/// Masks in preference order for breaking exact ties: more cards held
/// first, then higher mask.
fn preference_order() -> [usize; 32] {
    let mut v: [usize; 32] = std::array::from_fn(|i| i);
    v.sort_by_key(|&m| (std::cmp::Reverse((m as u32).count_ones()), std::cmp::Reverse(m)));
    v
}

#[derive(Default)]
struct Acc {
    hands: u128,
    ev: u128,
    second: u128,
    mean_sq: u128,
    royal: u128,
    /// Best scaled EV → (hands, hands whose best hold discards everything).
    histogram: BTreeMap<u128, (u64, u64)>,
    tied_classes: u64,
    tied_hands: u64,
    effective_ties: u64,
}

impl Acc {
    fn one(t: &HoldTotals, w: u128) -> Acc {
        let best_ev = *t.ev.iter().max().unwrap();
        let tied: Vec<usize> = preference_order().into_iter().filter(|&m| t.ev[m] == best_ev).collect();
        let m = tied[0];
        let garbage = m == 0;
        let mut acc = Acc {
            hands: w,
            ev: w * best_ev,
            second: w * t.second[m],
            mean_sq: w * best_ev * best_ev,
            royal: w * t.royal[m],
            ..Default::default()
        };
        acc.histogram.insert(best_ev, (w as u64, if garbage { w as u64 } else { 0 }));
        if tied.len() > 1 {
            acc.tied_classes = 1;
            acc.tied_hands = w as u64;
            if tied.iter().any(|&o| t.second[o] != t.second[m] || t.royal[o] != t.royal[m]) {
                acc.effective_ties = 1;
            }
        }
        acc
    }

    fn merge(mut a: Acc, b: Acc) -> Acc {
        a.hands += b.hands;
        a.ev += b.ev;
        a.second += b.second;
        a.mean_sq += b.mean_sq;
        a.royal += b.royal;
        for (k, (n, g)) in b.histogram {
            let e = a.histogram.entry(k).or_insert((0, 0));
            e.0 += n;
            e.1 += g;
        }
        a.tied_classes += b.tied_classes;
        a.tied_hands += b.tied_hands;
        a.effective_ties += b.effective_ties;
        a
    }

    fn finish(self, pt: &PayTable, den: u128) -> GameAnalysis {
        assert_eq!(self.hands, 2_598_960);
        let r = |x: u128| Rational::from(x);
        let scale = r(LCD) * r(den);
        let hands = r(self.hands);
        let expected_return = r(self.ev) / (&scale * &hands);
        let second_moment = r(self.second) / (&scale * r(den) * &hands);
        let variance = &second_moment - &expected_return * &expected_return;
        let mean_sq = r(self.mean_sq) / (&scale * &scale * &hands);
        let royal_probability = r(self.royal) / (r(LCD) * &hands);
        let mut distinct = BTreeSet::new();
        let mut distinct_non_garbage = BTreeSet::new();
        let mut garbage_hands = 0;
        let histogram: Vec<(Rational, u64)> = self
            .histogram
            .iter()
            .map(|(&k, &(n, g))| {
                distinct.insert(k);
                if n > g {
                    distinct_non_garbage.insert(k);
                }
                garbage_hands += g;
                (r(k) / &scale, n)
            })
            .collect();
        GameAnalysis {
            paytable: pt.name.clone(),
            expected_return,
            second_moment,
            variance,
            conditional_mean_square: mean_sq,
            royal_probability,
            distinct_values: distinct.len(),
            distinct_non_garbage: distinct_non_garbage.len(),
            garbage_hands,
            histogram,
            ties: TieAudit {
                classes: self.tied_classes,
                hands: self.tied_hands,
                effective_classes: self.effective_ties,
            },
        }
    }
}

/// Hands whose best expectation is shared by two or more holds. Ties are
/// broken toward holding more cards; `effective_classes` counts classes
/// whose tied holds differ in payout distribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TieAudit {
    pub classes: u64,
    pub hands: u64,
    pub effective_classes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameAnalysis {
    pub paytable: String,
    pub expected_return: Rational,
    pub second_moment: Rational,
    pub variance: Rational,
    /// E[m²] where m is the optimal conditional expectation given the deal.
    pub conditional_mean_square: Rational,
    pub royal_probability: Rational,
    pub distinct_values: usize,
    pub distinct_non_garbage: usize,
    pub garbage_hands: u64,
    /// Optimal conditional expectation → number of initial hands.
    pub histogram: Vec<(Rational, u64)>,
    pub ties: TieAudit,
}

impl GameAnalysis {
    pub fn sd_decimal(&self, digits: usize) -> String {
        self.variance.sqrt_decimal(digits).expect("variance is nonnegative")
    }

    /// Variance of the conditional mean over deals.
    pub fn between_variance(&self) -> Rational {
        &self.conditional_mean_square - &self.expected_return * &self.expected_return
    }

    /// Mean variance of one line's return given the deal and hold.
    pub fn within_variance(&self) -> Rational {
        &self.second_moment - &self.conditional_mean_square
    }

    /// n-play with the same hold on every line and independent draws from
    /// the shared 47-card residual.
    pub fn multi_play(&self, n: u32) -> MultiPlayVariance {
        let b = self.between_variance();
        let w = self.within_variance();
        let n = Rational::from(n);
        MultiPlayVariance {
            divided_stake: &b + &w / &n,
            per_play_total: &n * &n * &b + &n * &w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiPlayVariance {
    /// One unit split evenly across the lines.
    pub divided_stake: Rational,
    /// One unit on each line; variance of the total return.
    pub per_play_total: Rational,
}

/// All 32 holds of a hand ranked by expectation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoldAnalysis {
    pub hand: Vec<Card>,
    /// (held cards, expectation), best first.
    pub per_hold: Vec<(Vec<Card>, u8, Rational)>,
    pub best_mask: u8,
    pub best_ev: Rational,
}

fn held(hand: &[Card], mask: u8) -> Vec<Card> {
    (0..5).filter(|&i| mask & (1 << i) != 0).map(|i| hand[i]).collect()
}

/// Expectation of holding `hand[i]` for each set bit `i` of `mask`,
/// drawing the rest from the 47 unseen cards, by direct enumeration.
pub fn hold_ev(hand: &[Card], mask: u8, pt: &PayTable) -> Result<Rational> {
    sorted_hand(hand)?;
    if mask >= 32 {
        return Err(Error::InvalidParameters(format!("hold mask {mask} exceeds 5 bits")));
    }
    let pays = pt.by_class();
    let kept = crate::cards::mask_of(&held(hand, mask));
    let all = crate::cards::mask_of(hand);
    let residual: Vec<u64> = Card::deck().map(|c| c.bit()).filter(|b| all & b == 0).collect();
    let need = 5 - mask.count_ones() as usize;
    let mut counts = [0u64; CLASSES];
    crate::cards::for_each_combination(residual.len(), need, |idx| {
        let m = idx.iter().fold(kept, |m, &i| m | residual[i]);
        counts[pay_class(eval_mask(m))] += 1;
    });
    let total: u64 = counts.iter().sum();
    let sum: Rational = (0..CLASSES).map(|c| Rational::from(counts[c]) * &pays[c]).sum();
    Ok(sum / Rational::from(total))
}

/// Every hold of one hand ranked, using the subset table.
pub fn analyze_hand(analyzer: &Analyzer, hand: &[Card], pt: &PayTable) -> Result<HoldAnalysis> {
    let evs = analyzer.hold_evs(hand, pt)?;
    let mut per_hold: Vec<(Vec<Card>, u8, Rational)> =
        (0..32u8).map(|m| (held(hand, m), m, evs[m as usize].clone())).collect();
    let pref = preference_order();
    let rank = |m: u8| pref.iter().position(|&p| p == m as usize).unwrap();
    per_hold.sort_by(|a, b| b.2.cmp(&a.2).then(rank(a.1).cmp(&rank(b.1))));
    let (_, best_mask, best_ev) = per_hold[0].clone();
    Ok(HoldAnalysis { hand: hand.to_vec(), per_hold, best_mask, best_ev })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cards::{parse_cards, suit_canonical};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::OnceLock;

    fn analyzer() -> &'static Analyzer {
        static A: OnceLock<Analyzer> = OnceLock::new();
        A.get_or_init(Analyzer::new)
    }

    #[test]
    fn lcd() {
        let l = (0..=5u32).fold(1u128, |l, k| l.lcm(&completions(k)));
        assert_eq!(l, LCD);
    }

    #[test]
    fn royal_held() {
        let hand = parse_cards("As Ks Qs Js Ts").unwrap();
        let pt = PayTable::nine_six();
        assert_eq!(hold_ev(&hand, 31, &pt).unwrap(), Rational::from(800));
        assert_eq!(analyze_hand(analyzer(), &hand, &pt).unwrap().best_ev, Rational::from(800));
    }

    #[test]
    fn lone_ace_beats_three_card_straight_flush() {
        let hand = parse_cards("Ah 3d 5c 7c 9c").unwrap();
        let pt = PayTable::nine_six();
        let a = analyze_hand(analyzer(), &hand, &pt).unwrap();
        assert_eq!(a.best_mask, 0b00001);
        let sf3 = hold_ev(&hand, 0b11100, &pt).unwrap();
        assert!(a.best_ev > sf3);
        assert_eq!(a.best_ev, hold_ev(&hand, 1, &pt).unwrap());
    }

    #[test]
    fn table_matches_direct_enumeration() {
        let pt = PayTable::nine_six();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut deck: Vec<Card> = Card::deck().collect();
        for _ in 0..3 {
            deck.shuffle(&mut rng);
            let hand = &deck[..5];
            let evs = analyzer().hold_evs(hand, &pt).unwrap();
            for m in [0u8, 1, 6, 19, 30, 31] {
                assert_eq!(evs[m as usize], hold_ev(hand, m, &pt).unwrap(), "{m}");
            }
            // Same best EV for the suit-canonical representative.
            let canon = suit_canonical(hand).unwrap();
            let best = |h: &[Card]| analyzer().hold_evs(h, &pt).unwrap().into_iter().max().unwrap();
            assert_eq!(best(hand), best(&canon));
        }
        // Garbage hand: discard-all over all C(47,5) draws.
        let garbage = parse_cards("2c 7d 9h Js 4s").unwrap();
        let evs = analyzer().hold_evs(&garbage, &pt).unwrap();
        assert_eq!(evs[0], hold_ev(&garbage, 0, &pt).unwrap());
    }

    #[test]
    fn paytable_checks() {
        let mut pt = PayTable::nine_six();
        pt.flush = Rational::from(10);
        assert!(pt.validate().is_err());
        assert!(PayTable::preset("10-7").is_err());
        let json = serde_json::to_string(&PayTable::nine_six()).unwrap();
        let back: PayTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, PayTable::nine_six());
    }
}
