//! Snackjack: an eight-card blackjack (two aces, two deuces, four treys),
//! target 7, ace-trey natural. Exact composition-dependent expectations.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Card ranks by index: ace, deuce, trey.
pub const RANKS: [char; 3] = ['A', '2', '3'];
pub const FULL_DECK: SnackDeck = SnackDeck([2, 2, 4]);

pub fn rank_index(c: char) -> Result<usize> {
    match c.to_ascii_uppercase() {
        'A' | '1' => Ok(0),
        '2' => Ok(1),
        '3' => Ok(2),
        _ => Err(Error::Parse(format!("unknown snackjack card {c:?}"))),
    }
}

/// Counts of aces, deuces and treys remaining.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SnackDeck(pub [u8; 3]);

impl SnackDeck {
    pub fn new(aces: u8, deuces: u8, treys: u8) -> Result<Self> {
        let d = SnackDeck([aces, deuces, treys]);
        if (0..3).any(|i| d.0[i] > FULL_DECK.0[i]) {
            return Err(Error::InconsistentDeck(format!("{d} exceeds (2,2,4)")));
        }
        Ok(d)
    }

    pub fn len(&self) -> u32 {
        self.0.iter().map(|&c| c as u32).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn minus(&self, r: usize) -> Option<SnackDeck> {
        let mut d = *self;
        d.0[r] = d.0[r].checked_sub(1)?;
        Some(d)
    }

    pub fn minus_hand(&self, h: &Hand) -> Option<SnackDeck> {
        let mut d = *self;
        for r in 0..3 {
            d.0[r] = d.0[r].checked_sub(h.0[r])?;
        }
        Some(d)
    }

    /// Probability of drawing rank `r` next.
    fn draw_prob(&self, r: usize) -> Rational {
        Rational::new(self.0[r] as i64, self.len() as i64)
    }
}

impl fmt::Display for SnackDeck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A hand as rank counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Hand(pub [u8; 3]);

impl Hand {
    pub fn of(cards: &[usize]) -> Hand {
        let mut h = Hand([0; 3]);
        for &c in cards {
            h.0[c] += 1;
        }
        h
    }

    pub fn parse(s: &str) -> Result<Hand> {
        let cards = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                let mut ch = t.chars();
                match (ch.next(), ch.next()) {
                    (Some(c), None) => rank_index(c),
                    _ => Err(Error::Parse(format!("unknown snackjack card {t:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let h = Hand::of(&cards);
        if FULL_DECK.minus_hand(&h).is_none() {
            return Err(Error::InconsistentDeck(format!("hand {s} exceeds the deck")));
        }
        Ok(h)
    }

    pub fn len(&self) -> u8 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn hard(&self) -> u8 {
        self.0[0] + 2 * self.0[1] + 3 * self.0[2]
    }

    /// Best total with one ace counted as 4 when that stays within 7.
    pub fn total(&self) -> u8 {
        let hard = self.hard();
        if self.0[0] > 0 && hard + 3 <= 7 {
            hard + 3
        } else {
            hard
        }
    }

    pub fn is_soft(&self) -> bool {
        self.0[0] > 0 && self.hard() + 3 <= 7
    }

    pub fn is_bust(&self) -> bool {
        self.total() > 7
    }

    pub fn is_natural(&self) -> bool {
        self.0 == [1, 0, 1]
    }

    pub fn is_pair(&self) -> bool {
        self.len() == 2 && self.0.contains(&2)
    }

    fn plus(&self, r: usize) -> Hand {
        let mut h = *self;
        h.0[r] += 1;
        h
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for r in 0..3 {
            for _ in 0..self.0[r] {
                if !first {
                    f.write_str(",")?;
                }
                write!(f, "{}", RANKS[r])?;
                first = false;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SnackAction {
    Stand,
    Hit,
    Double,
    Split,
}

impl SnackAction {
    /// In tie-break order.
    pub const ALL: [SnackAction; 4] = [SnackAction::Stand, SnackAction::Hit, SnackAction::Double, SnackAction::Split];

    pub fn name(self) -> &'static str {
        match self {
            SnackAction::Stand => "stand",
            SnackAction::Hit => "hit",
            SnackAction::Double => "double",
            SnackAction::Split => "split",
        }
    }
}

impl std::str::FromStr for SnackAction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SnackAction::ALL
            .into_iter()
            .find(|a| a.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown action {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rules {
    /// Net payoff of a player natural against a dealer non-natural.
    pub natural_pays: Rational,
    pub double_after_split: bool,
}

impl Default for Rules {
    fn default() -> Self {
        Rules { natural_pays: Rational::new(3, 2), double_after_split: false }
    }
}

/// A dealer completion from the upcard: the cards in order, its
/// probability, and the final total (`None` for a bust).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DealerSequence {
    pub cards: Vec<char>,
    pub probability: Rational,
    pub total: Option<u8>,
}

fn dealer_walk(hand: Hand, seq: &mut Vec<usize>, deck: SnackDeck, p: Rational, out: &mut Vec<(Vec<usize>, Rational, Hand)>) {
    if hand.is_bust() || hand.total() >= 6 {
        out.push((seq.clone(), p, hand));
        return;
    }
    assert!(!deck.is_empty(), "dealer ran out of cards");
    for r in 0..3 {
        if deck.0[r] == 0 {
            continue;
        }
        seq.push(r);
        dealer_walk(hand.plus(r), seq, deck.minus(r).unwrap(), &p * deck.draw_prob(r), out);
        seq.pop();
    }
}

/// Every dealer drawing sequence (hole card first, then hits) given the
/// upcard and the unseen cards, including natural holes.
pub fn dealer_sequences(upcard: usize, deck: SnackDeck) -> Result<Vec<DealerSequence>> {
    if upcard > 2 {
        return Err(Error::InconsistentDeck(format!("upcard index {upcard}")));
    }
    if deck.minus_hand(&Hand::of(&[upcard])).is_some() && deck.0 == FULL_DECK.0 {
        return Err(Error::InconsistentDeck("deck still contains the upcard".into()));
    }
    if deck.is_empty() {
        return Err(Error::InconsistentDeck("no hole card available".into()));
    }
    let mut out = Vec::new();
    dealer_walk(Hand::of(&[upcard]), &mut Vec::new(), deck, Rational::one(), &mut out);
    Ok(out
        .into_iter()
        .map(|(seq, probability, hand)| DealerSequence {
            cards: std::iter::once(upcard).chain(seq).map(|r| RANKS[r]).collect(),
            probability,
            total: (!hand.is_bust()).then(|| hand.total()),
        })
        .collect())
}

/// Hole-card weights given no dealer natural.
fn hole_posterior(upcard: usize, deck: SnackDeck) -> Vec<(usize, Rational)> {
    let natural_hole = match upcard {
        0 => Some(2),
        2 => Some(0),
        _ => None,
    };
    let z: u32 = (0..3)
        .filter(|&r| Some(r) != natural_hole)
        .map(|r| deck.0[r] as u32)
        .sum();
    (0..3)
        .filter(|&r| Some(r) != natural_hole && deck.0[r] > 0)
        .map(|r| (r, Rational::new(deck.0[r] as i64, z as i64)))
        .collect()
}

/// Dealer final-total distribution (`None` = bust) once the hole card is
/// known.
fn dealer_finals(upcard: usize, hole: usize, deck: SnackDeck) -> Vec<(Option<u8>, Rational)> {
    let mut out = Vec::new();
    dealer_walk(Hand::of(&[upcard, hole]), &mut Vec::new(), deck, Rational::one(), &mut out);
    let mut acc: BTreeMap<Option<u8>, Rational> = BTreeMap::new();
    for (_, p, h) in out {
        *acc.entry((!h.is_bust()).then(|| h.total())).or_insert_with(Rational::zero) += p;
    }
    acc.into_iter().collect()
}

fn compare(player: u8, dealer: Option<u8>) -> i64 {
    match dealer {
        None => 1,
        Some(d) => (player as i64 - d as i64).signum(),
    }
}

/// Player decision state: the hand, dealer upcard, and the unseen cards
/// (including the dealer's hole card).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SnackState {
    pub hand: Hand,
    pub upcard: usize,
    pub unseen: SnackDeck,
    /// Only the initial two-card hand may double or split.
    pub initial: bool,
}

impl SnackState {
    /// State at the start of a round with the given hand and upcard from a
    /// full deck.
    pub fn deal(hand: Hand, upcard: usize) -> Result<SnackState> {
        let unseen = FULL_DECK
            .minus_hand(&hand)
            .and_then(|d| d.minus(upcard))
            .ok_or_else(|| Error::InconsistentDeck(format!("{hand} vs {} exceeds the deck", RANKS[upcard])))?;
        Ok(SnackState { hand, upcard, unseen, initial: hand.len() == 2 })
    }

    pub fn is_reachable(&self) -> bool {
        !self.hand.is_bust() && hole_posterior(self.upcard, self.unseen).iter().any(|(_, w)| w.is_positive())
    }

    pub fn legal(&self, a: SnackAction) -> bool {
        match a {
            SnackAction::Stand | SnackAction::Hit => true,
            SnackAction::Double => self.initial,
            SnackAction::Split => self.initial && self.hand.is_pair(),
        }
    }
}

/// Exact expectations with memoized optimal play after hitting.
#[derive(Debug, Default)]
pub struct Solver {
    pub rules: Rules,
    memo: std::collections::HashMap<(Hand, usize, SnackDeck), Rational>,
}

impl Solver {
    pub fn new(rules: Rules) -> Self {
        Solver { rules, memo: Default::default() }
    }

    /// Distribution of the next card from the unseen cards, given the hole
    /// card is among them and is not a natural.
    fn next_card(&self, upcard: usize, unseen: SnackDeck) -> Vec<(usize, Rational)> {
        let mut probs = [Rational::zero(), Rational::zero(), Rational::zero()];
        for (h, w) in hole_posterior(upcard, unseen) {
            let rest = unseen.minus(h).unwrap();
            for (c, p) in probs.iter_mut().enumerate() {
                if rest.0[c] > 0 {
                    *p += &w * rest.draw_prob(c);
                }
            }
        }
        probs.into_iter().enumerate().filter(|(_, p)| p.is_positive()).collect()
    }

    fn stand_value(&self, total: u8, upcard: usize, unseen: SnackDeck) -> Rational {
        let mut ev = Rational::zero();
        for (h, w) in hole_posterior(upcard, unseen) {
            for (d, p) in dealer_finals(upcard, h, unseen.minus(h).unwrap()) {
                ev += &w * p * Rational::from(compare(total, d));
            }
        }
        ev
    }

    /// Value of a hand that may only stand or hit.
    fn play_value(&mut self, hand: Hand, upcard: usize, unseen: SnackDeck) -> Rational {
        if hand.is_bust() {
            return -Rational::one();
        }
        let key = (hand, upcard, unseen);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let stand = self.stand_value(hand.total(), upcard, unseen);
        let hit = self.hit_value(hand, upcard, unseen);
        let v = stand.max(hit);
        self.memo.insert(key, v.clone());
        v
    }

    fn hit_value(&mut self, hand: Hand, upcard: usize, unseen: SnackDeck) -> Rational {
        let mut ev = Rational::zero();
        for (c, p) in self.next_card(upcard, unseen) {
            ev += p * self.play_value(hand.plus(c), upcard, unseen.minus(c).unwrap());
        }
        ev
    }

    fn double_value(&self, hand: Hand, upcard: usize, unseen: SnackDeck) -> Rational {
        let mut ev = Rational::zero();
        for (c, p) in self.next_card(upcard, unseen) {
            let h = hand.plus(c);
            let v = if h.is_bust() {
                -Rational::one()
            } else {
                self.stand_value(h.total(), upcard, unseen.minus(c).unwrap())
            };
            ev += p * v;
        }
        Rational::from(2) * ev
    }

    /// Each paircard receives one card and stands; split hands of ace-trey
    /// count as 7, not naturals.
    fn split_value(&self, hand: Hand, upcard: usize, unseen: SnackDeck) -> Rational {
        let x = hand.0.iter().position(|&c| c == 2).expect("pair");
        let mut ev = Rational::zero();
        for (h, w) in hole_posterior(upcard, unseen) {
            let after_hole = unseen.minus(h).unwrap();
            for c1 in 0..3 {
                let Some(d1) = after_hole.minus(c1) else { continue };
                let p1 = after_hole.draw_prob(c1);
                for c2 in 0..3 {
                    let Some(d2) = d1.minus(c2) else { continue };
                    let p12 = &p1 * d1.draw_prob(c2);
                    let t1 = Hand::of(&[x, c1]).total();
                    let t2 = Hand::of(&[x, c2]).total();
                    for (d, p) in dealer_finals(upcard, h, d2) {
                        let o = compare(t1, d) + compare(t2, d);
                        ev += &w * &p12 * p * Rational::from(o);
                    }
                }
            }
        }
        ev
    }

    /// Expectation of taking `action` at `state` then playing optimally,
    /// conditional on the dealer not holding a natural.
    pub fn action_ev(&mut self, state: &SnackState, action: SnackAction) -> Result<Rational> {
        if !state.legal(action) {
            return Err(Error::IllegalAction(format!("{} with {}", action.name(), state.hand)));
        }
        if !state.is_reachable() {
            return Err(Error::InconsistentDeck(format!(
                "{} vs {} with unseen {} cannot occur without a dealer natural",
                state.hand, RANKS[state.upcard], state.unseen
            )));
        }
        let (h, u, d) = (state.hand, state.upcard, state.unseen);
        Ok(match action {
            SnackAction::Stand => self.stand_value(h.total(), u, d),
            SnackAction::Hit => self.hit_value(h, u, d),
            SnackAction::Double => self.double_value(h, u, d),
            SnackAction::Split => self.split_value(h, u, d),
        })
    }

    fn best(&mut self, state: &SnackState) -> (SnackAction, Rational, Vec<(SnackAction, Rational)>, bool) {
        let evs: Vec<(SnackAction, Rational)> = SnackAction::ALL
            .into_iter()
            .filter(|&a| state.legal(a))
            .map(|a| (a, self.action_ev(state, a).unwrap()))
            .collect();
        let max = evs.iter().map(|(_, v)| v.clone()).max().unwrap();
        let tied = evs.iter().filter(|(_, v)| *v == max).count() > 1;
        let action = evs.iter().find(|(_, v)| *v == max).unwrap().0;
        (action, max, evs, tied)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionPoint {
    pub hand: String,
    pub upcard: char,
    pub total: u8,
    pub soft: bool,
    pub action: SnackAction,
    pub ev: Rational,
    pub alternatives: Vec<(SnackAction, Rational)>,
    /// Set when another action has the same expectation.
    pub tie: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyTable {
    pub points: Vec<DecisionPoint>,
    /// Player expectation per round under the table, naturals included.
    pub game_ev: Rational,
}

impl StrategyTable {
    pub fn lookup(&self, hand: &Hand, upcard: usize) -> Option<&DecisionPoint> {
        let key = hand.to_string();
        self.points.iter().find(|p| p.hand == key && p.upcard == RANKS[upcard])
    }
}

/// Every hand composition reachable by dealing two cards and hitting, with
/// non-bust total, that fits in the deck with the upcard.
fn reachable_hands() -> Vec<Hand> {
    let mut out = Vec::new();
    for a in 0..=2u8 {
        for d in 0..=2u8 {
            for t in 0..=4u8 {
                let h = Hand([a, d, t]);
                if h.len() >= 2 && !h.is_bust() {
                    out.push(h);
                }
            }
        }
    }
    out.sort_by_key(|h| (h.len(), std::cmp::Reverse(h.0)));
    out
}

/// Composition-dependent basic strategy: every player decision point that
/// can arise without a dealer natural, with its optimal action, and the
/// overall expectation per round.
pub fn basic_strategy(rules: &Rules) -> StrategyTable {
    let mut solver = Solver::new(rules.clone());
    let mut points = Vec::new();
    for hand in reachable_hands() {
        for upcard in 0..3 {
            let Ok(mut state) = SnackState::deal(hand, upcard) else { continue };
            if !state.is_reachable() {
                continue;
            }
            state.initial = hand.len() == 2;
            // A natural is settled at once; it is listed so the table covers
            // every dealt hand.
            let (action, ev, alternatives, tie) = if hand.is_natural() {
                let pays = rules.natural_pays.clone();
                (SnackAction::Stand, pays.clone(), vec![(SnackAction::Stand, pays)], false)
            } else {
                solver.best(&state)
            };
            points.push(DecisionPoint {
                hand: hand.to_string(),
                upcard: RANKS[upcard],
                total: hand.total(),
                soft: hand.is_soft(),
                action,
                ev,
                alternatives,
                tie,
            });
        }
    }
    let game_ev = game_ev_with(&mut solver);
    StrategyTable { points, game_ev }
}

fn game_ev_with(solver: &mut Solver) -> Rational {
    let mut ev = Rational::zero();
    let natural = solver.rules.natural_pays.clone();
    // Deal player two cards, then upcard, then hole, from the full deck.
    let mut walk = |cards: &[usize], p: Rational| {
        let hand = Hand::of(&cards[..2]);
        let (u, h) = (cards[2], cards[3]);
        let dealer_nat = Hand::of(&[u, h]).is_natural();
        let v = if dealer_nat {
            if hand.is_natural() {
                Rational::zero()
            } else {
                -Rational::one()
            }
        } else if hand.is_natural() {
            natural.clone()
        } else {
            let state = SnackState::deal(hand, u).unwrap();
            solver.best(&state).1
        };
        ev += p * v;
    };
    fn deal(deck: SnackDeck, cards: &mut Vec<usize>, p: Rational, f: &mut dyn FnMut(&[usize], Rational)) {
        if cards.len() == 4 {
            f(cards, p);
            return;
        }
        for r in 0..3 {
            if let Some(d) = deck.minus(r) {
                cards.push(r);
                deal(d, cards, &p * deck.draw_prob(r), f);
                cards.pop();
            }
        }
    }
    deal(FULL_DECK, &mut Vec::new(), Rational::one(), &mut walk);
    ev
}

/// Round-by-round simulation under a strategy table; returns the sample
/// mean and variance of the player's net result.
pub fn simulate(table: &StrategyTable, rules: &Rules, rounds: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cards: Vec<usize> = Vec::with_capacity(8);
    for (r, &n) in FULL_DECK.0.iter().enumerate() {
        cards.extend(std::iter::repeat(r).take(n as usize));
    }
    let natural = rules.natural_pays.to_f64();
    let lookup: std::collections::HashMap<(Hand, usize), SnackAction> = table
        .points
        .iter()
        .map(|p| {
            let h = Hand::parse(&p.hand).unwrap();
            ((h, rank_index(p.upcard).unwrap()), p.action)
        })
        .collect();
    let dealer_total = |hand: Hand, next: &mut dyn Iterator<Item = usize>| {
        let mut h = hand;
        while !h.is_bust() && h.total() < 6 {
            h = h.plus(next.next().expect("deck exhausted"));
        }
        (!h.is_bust()).then(|| h.total())
    };
    let (mut sum, mut sum_sq) = (0f64, 0f64);
    for _ in 0..rounds {
        cards.shuffle(&mut rng);
        let mut it = cards.iter().copied();
        let (p1, p2, u, h) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
        let mut hand = Hand::of(&[p1, p2]);
        let dealer = Hand::of(&[u, h]);
        let x = if dealer.is_natural() {
            if hand.is_natural() { 0.0 } else { -1.0 }
        } else if hand.is_natural() {
            natural
        } else {
            let mut stake = 1.0;
            let mut split = None;
            loop {
                if hand.is_bust() {
                    break;
                }
                match lookup[&(hand, u)] {
                    SnackAction::Stand => break,
                    SnackAction::Hit => hand = hand.plus(it.next().unwrap()),
                    SnackAction::Double => {
                        stake = 2.0;
                        hand = hand.plus(it.next().unwrap());
                        break;
                    }
                    SnackAction::Split => {
                        let x = hand.0.iter().position(|&c| c == 2).unwrap();
                        split = Some((Hand::of(&[x, it.next().unwrap()]), Hand::of(&[x, it.next().unwrap()])));
                        break;
                    }
                }
            }
            match split {
                Some((a, b)) => {
                    let d = dealer_total(dealer, &mut it);
                    (compare(a.total(), d) + compare(b.total(), d)) as f64
                }
                None if hand.is_bust() => -stake,
                None => stake * compare(hand.total(), dealer_total(dealer, &mut it)) as f64,
            }
        };
        sum += x;
        sum_sq += x * x;
    }
    let n = rounds as f64;
    let mean = sum / n;
    (mean, sum_sq / n - mean * mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use std::collections::BTreeSet;

    #[test]
    fn totals() {
        assert_eq!(Hand::parse("A,A").unwrap().total(), 5);
        assert!(Hand::parse("A,A").unwrap().is_soft());
        assert_eq!(Hand::parse("A,A,3").unwrap().total(), 5);
        assert!(!Hand::parse("A,A,3").unwrap().is_soft());
        assert!(Hand::parse("A,3").unwrap().is_natural());
        assert!(Hand::parse("3,3,2").unwrap().is_bust());
        assert!(Hand::parse("3,3,3").is_ok());
        assert!(Hand::parse("A,A,A").is_err());
    }

    #[test]
    fn seventeen_dealer_sequences() {
        let mut all = BTreeSet::new();
        for u in 0..3 {
            let deck = FULL_DECK.minus(u).unwrap();
            let seqs = dealer_sequences(u, deck).unwrap();
            let total: Rational = seqs.iter().map(|s| s.probability.clone()).sum();
            assert_eq!(total, Rational::one());
            all.extend(seqs.into_iter().map(|s| s.cards));
        }
        assert_eq!(all.len(), 17);
    }

    #[test]
    fn figure_tree() {
        let s = SnackState::deal(Hand::parse("3,3").unwrap(), 0).unwrap();
        assert_eq!(s.unseen, SnackDeck([1, 2, 2]));
        let post = hole_posterior(0, s.unseen);
        assert_eq!(post, vec![(0, ratio(1, 3)), (1, ratio(2, 3))]);
        let mut solver = Solver::default();
        assert_eq!(solver.action_ev(&s, SnackAction::Stand).unwrap(), ratio(-2, 9));
        // Branches below the A,A node: 2/4 deuce (s7) and 2/4 trey (h5),
        // then 2/3 deuce (h7) and 1/3 trey (bust).
        let finals = dealer_finals(0, 0, SnackDeck([0, 2, 2]));
        assert_eq!(finals, vec![(None, ratio(1, 6)), (Some(7), ratio(5, 6))]);
        let seqs = dealer_sequences(0, SnackDeck([0, 2, 2])).unwrap();
        assert!(seqs.iter().any(|q| q.cards == vec!['A', '2'] && q.total == Some(6) && q.probability == ratio(1, 2)));
    }

    #[test]
    fn symmetric_relabelling() {
        // Solving with an explicit card list (deuces and treys individually
        // labelled) gives the same stand value.
        let cards = ["A1", "A2", "21", "22", "31", "32", "33", "34"];
        let rank = |c: &str| rank_index(c.chars().next().unwrap()).unwrap();
        let player = ["33", "31"];
        let up = "A2";
        let rest: Vec<&str> = cards.iter().copied().filter(|c| !player.contains(c) && *c != up).collect();
        let mut num = 0i64;
        let mut den = 0i64;
        // Ordered permutations of the remaining five cards, dealer drawing
        // from the front.
        fn perms<'a>(v: &[&'a str], acc: &mut Vec<&'a str>, out: &mut Vec<Vec<&'a str>>) {
            if v.is_empty() {
                out.push(acc.clone());
                return;
            }
            for i in 0..v.len() {
                let mut rest = v.to_vec();
                let c = rest.remove(i);
                acc.push(c);
                perms(&rest, acc, out);
                acc.pop();
            }
        }
        let mut all = Vec::new();
        perms(&rest, &mut Vec::new(), &mut all);
        for order in all {
            let hole = rank(order[0]);
            if hole == 2 {
                continue;
            }
            let mut h = Hand::of(&[rank(up), hole]);
            let mut i = 1;
            while !h.is_bust() && h.total() < 6 {
                h = h.plus(rank(order[i]));
                i += 1;
            }
            num += compare(6, (!h.is_bust()).then(|| h.total()));
            den += 1;
        }
        assert_eq!(Rational::new(num, den), ratio(-2, 9));
    }

    #[test]
    fn strategy_table() {
        let rules = Rules::default();
        let table = basic_strategy(&rules);
        assert_eq!(table.points.len(), 32);
        for p in &table.points {
            for (_, v) in &p.alternatives {
                assert!(p.ev >= *v);
            }
            if p.total == 7 && !(p.hand == "A,3") {
                let stand = &p.alternatives.iter().find(|(a, _)| *a == SnackAction::Stand).unwrap().1;
                let hit = &p.alternatives.iter().find(|(a, _)| *a == SnackAction::Hit).unwrap().1;
                if p.hand == "A,A,2" && p.upcard == '2' {
                    // Only treys remain, so the dealer's 5 busts whatever
                    // the player does.
                    assert_eq!((stand, hit), (&Rational::one(), &Rational::one()));
                    assert!(p.tie && p.action == SnackAction::Stand);
                } else {
                    assert!(stand > hit, "{} vs {}", p.hand, p.upcard);
                }
            }
        }
        assert!(table.lookup(&Hand::parse("2,2,A").unwrap(), 0).is_none());
        let (mean, var) = simulate(&table, &rules, 2_000_000, 7);
        let se = (var / 2_000_000f64).sqrt();
        assert!((mean - table.game_ev.to_f64()).abs() < 4.0 * se, "{mean} vs {}", table.game_ev);
    }

    #[test]
    fn split_three_three_vs_ace() {
        let s = SnackState::deal(Hand::parse("3,3").unwrap(), 0).unwrap();
        let mut solver = Solver::default();
        let exact = solver.action_ev(&s, SnackAction::Split).unwrap();
        // Monte Carlo over shuffles conditioned on no dealer natural.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut rest = vec![0usize, 1, 1, 2, 2];
        let (mut sum, mut n) = (0f64, 0u64);
        while n < 400_000 {
            rest.shuffle(&mut rng);
            if rest[0] == 2 {
                continue;
            }
            let t1 = Hand::of(&[2, rest[1]]).total();
            let t2 = Hand::of(&[2, rest[2]]).total();
            let mut d = Hand::of(&[0, rest[0]]);
            let mut i = 3;
            while !d.is_bust() && d.total() < 6 {
                d = d.plus(rest[i]);
                i += 1;
            }
            let dt = (!d.is_bust()).then(|| d.total());
            sum += (compare(t1, dt) + compare(t2, dt)) as f64;
            n += 1;
        }
        assert!((sum / n as f64 - exact.to_f64()).abs() < 0.01, "{exact}");
        let hit_only = SnackState { initial: false, ..s };
        assert!(solver.action_ev(&hit_only, SnackAction::Split).is_err());
    }
}
