//! Heads-up chance hold'em: both players see the flop, turn and river with
//! no further betting. Exact expectations in big blinds.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cards::{check_distinct, eval_mask, five_card_classes, suit_permutations, Card};
use crate::combin::choose;
use crate::error::{Error, Result};
use crate::rational::Rational;

const FACES: &[u8; 13] = b"23456789TJQKA";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HandKind {
    Pair,
    Suited,
    Offsuit,
}

/// One of the 169 starting-hand classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HoleHandClass {
    pub high: u8,
    pub low: u8,
    pub kind: HandKind,
}

impl HoleHandClass {
    pub fn of(a: Card, b: Card) -> HoleHandClass {
        let (high, low) = (a.rank().max(b.rank()), a.rank().min(b.rank()));
        let kind = if high == low {
            HandKind::Pair
        } else if a.suit() == b.suit() {
            HandKind::Suited
        } else {
            HandKind::Offsuit
        };
        HoleHandClass { high, low, kind }
    }

    /// Index in 0..169: pairs on the diagonal of a 13×13 grid, suited above
    /// and offsuit below.
    pub fn index(self) -> usize {
        let (h, l) = (self.high as usize, self.low as usize);
        match self.kind {
            HandKind::Pair | HandKind::Suited => h * 13 + l,
            HandKind::Offsuit => l * 13 + h,
        }
    }

    pub fn from_index(i: usize) -> HoleHandClass {
        let (r, c) = ((i / 13) as u8, (i % 13) as u8);
        match r.cmp(&c) {
            std::cmp::Ordering::Equal => HoleHandClass { high: r, low: r, kind: HandKind::Pair },
            std::cmp::Ordering::Greater => HoleHandClass { high: r, low: c, kind: HandKind::Suited },
            std::cmp::Ordering::Less => HoleHandClass { high: c, low: r, kind: HandKind::Offsuit },
        }
    }

    /// Number of concrete two-card hands in the class.
    pub fn size(self) -> u32 {
        match self.kind {
            HandKind::Pair => 6,
            HandKind::Suited => 4,
            HandKind::Offsuit => 12,
        }
    }

    pub fn representative(self) -> [Card; 2] {
        match self.kind {
            HandKind::Pair => [Card::new(self.high, 3), Card::new(self.low, 2)],
            HandKind::Suited => [Card::new(self.high, 3), Card::new(self.low, 3)],
            HandKind::Offsuit => [Card::new(self.high, 3), Card::new(self.low, 2)],
        }
    }

    pub fn all() -> impl Iterator<Item = HoleHandClass> {
        (0..169).map(HoleHandClass::from_index)
    }
}

impl fmt::Display for HoleHandClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (h, l) = (FACES[self.high as usize] as char, FACES[self.low as usize] as char);
        match self.kind {
            HandKind::Pair => write!(f, "{h}{l}"),
            HandKind::Suited => write!(f, "{h}{l}s"),
            HandKind::Offsuit => write!(f, "{h}{l}o"),
        }
    }
}

impl Serialize for HoleHandClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for HoleHandClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let b = s.trim().as_bytes();
        let rank = |c: u8| {
            FACES
                .iter()
                .position(|&f| f == c.to_ascii_uppercase())
                .map(|r| r as u8)
                .ok_or_else(|| Error::Parse(format!("bad hand class {s:?}")))
        };
        if b.len() < 2 || b.len() > 3 {
            return Err(Error::Parse(format!("bad hand class {s:?}")));
        }
        let (x, y) = (rank(b[0])?, rank(b[1])?);
        let (high, low) = (x.max(y), x.min(y));
        let kind = match (high == low, b.get(2).map(|c| c.to_ascii_lowercase())) {
            (true, None) => HandKind::Pair,
            (false, Some(b's')) => HandKind::Suited,
            (false, Some(b'o')) => HandKind::Offsuit,
            _ => return Err(Error::Parse(format!("bad hand class {s:?}"))),
        };
        Ok(HoleHandClass { high, low, kind })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchupResult {
    pub wins: u64,
    pub ties: u64,
    pub losses: u64,
    pub total: u64,
    /// (wins − losses)/total in big blinds.
    pub net_gain: Rational,
}

impl MatchupResult {
    fn new(wins: u64, ties: u64, losses: u64) -> MatchupResult {
        let total = wins + ties + losses;
        MatchupResult {
            wins,
            ties,
            losses,
            total,
            net_gain: Rational::new(wins as i64 - losses as i64, total as i64),
        }
    }
}

fn check_hand(h: &[Card]) -> Result<()> {
    if h.len() != 2 {
        return Err(Error::InvalidParameters(format!("{} hole cards, need 2", h.len())));
    }
    Ok(())
}

/// Exact counts for `h1` against `h2` over all C(48,5) boards.
pub fn matchup(h1: &[Card], h2: &[Card]) -> Result<MatchupResult> {
    check_hand(h1)?;
    check_hand(h2)?;
    let both: Vec<Card> = h1.iter().chain(h2).copied().collect();
    check_distinct(&both)?;
    let used = crate::cards::mask_of(&both);
    let rest: Vec<u64> = Card::deck().map(|c| c.bit()).filter(|b| used & b == 0).collect();
    let (m1, m2) = (crate::cards::mask_of(h1), crate::cards::mask_of(h2));
    let (mut w, mut t, mut l) = (0u64, 0u64, 0u64);
    crate::cards::for_each_combination(rest.len(), 5, |idx| {
        let board = idx.iter().fold(0, |m, &i| m | rest[i]);
        match eval_mask(board | m1).cmp(&eval_mask(board | m2)) {
            std::cmp::Ordering::Greater => w += 1,
            std::cmp::Ordering::Equal => t += 1,
            std::cmp::Ordering::Less => l += 1,
        }
    });
    Ok(MatchupResult::new(w, t, l))
}

/// Two-card hands from 47 cards, as index pairs.
fn pairs47() -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(1081);
    for a in 0..47 {
        for b in a + 1..47 {
            v.push((a, b));
        }
    }
    v
}

/// For every two-card hand among the 47 cards off `board`, the sum over
/// opponent hands of (win − loss), by inclusion–exclusion over opponents
/// sharing a card.
fn board_nets(board: u64, rest: &[Card; 47], pairs: &[(usize, usize)], out: &mut Vec<i64>) {
    let bits: [u64; 47] = std::array::from_fn(|i| rest[i].bit());
    let mut keyed: Vec<u64> = pairs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| ((eval_mask(board | bits[a] | bits[b]).0 as u64) << 16) | i as u64)
        .collect();
    keyed.sort_unstable();
    // Hands containing each card with value strictly below the current group.
    let mut below_card = [0i64; 47];
    out.clear();
    out.resize(pairs.len(), 0);
    let opponents = choose(45, 2) as i64;
    let mut start = 0;
    while start < keyed.len() {
        let v = keyed[start] >> 16;
        let mut end = start;
        while end < keyed.len() && keyed[end] >> 16 == v {
            end += 1;
        }
        let mut eq_card = [0i64; 47];
        for &k in &keyed[start..end] {
            let (a, b) = pairs[(k & 0xFFFF) as usize];
            eq_card[a] += 1;
            eq_card[b] += 1;
        }
        let below_all = start as i64;
        let eq_all = (end - start) as i64;
        for &k in &keyed[start..end] {
            let i = (k & 0xFFFF) as usize;
            let (a, b) = pairs[i];
            let wins = below_all - below_card[a] - below_card[b];
            let ties = eq_all - eq_card[a] - eq_card[b] + 1;
            out[i] = 2 * wins + ties - opponents;
        }
        for c in 0..47 {
            below_card[c] += eq_card[c];
        }
        start = end;
    }
}

/// Heads-up net gain against a random hand for all 169 classes, by
/// iterating board suit classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ranking {
    /// Classes by decreasing net gain.
    pub entries: Vec<(HoleHandClass, Rational)>,
}

impl Ranking {
    pub fn compute() -> Ranking {
        let classes = five_card_classes();
        let pairs = pairs47();
        let sums = classes
            .par_iter()
            .fold(
                || (vec![0i64; 169], Vec::new()),
                |(mut acc, mut buf), (board, weight)| {
                    let bm = crate::cards::mask_of(board);
                    let rest_v: Vec<Card> = Card::deck().filter(|c| bm & c.bit() == 0).collect();
                    let rest: [Card; 47] = rest_v.try_into().unwrap();
                    board_nets(bm, &rest, &pairs, &mut buf);
                    for (i, &(a, b)) in pairs.iter().enumerate() {
                        acc[HoleHandClass::of(rest[a], rest[b]).index()] += *weight as i64 * buf[i];
                    }
                    (acc, buf)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(|| vec![0i64; 169], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
        let configs = choose(50, 2) as i64 * choose(48, 5) as i64;
        let mut entries: Vec<(HoleHandClass, Rational)> = HoleHandClass::all()
            .map(|c| (c, Rational::new(sums[c.index()], configs * c.size() as i64)))
            .collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        Ranking { entries }
    }

    pub fn rank_of(&self, c: HoleHandClass) -> Option<usize> {
        self.entries.iter().position(|(k, _)| *k == c).map(|i| i + 1)
    }

    pub fn value(&self, c: HoleHandClass) -> Option<&Rational> {
        self.entries.iter().find(|(k, _)| *k == c).map(|(_, v)| v)
    }
}

/// All 169 classes with their net gain against a random hand, best first.
pub fn rank_all() -> Vec<(HoleHandClass, Rational)> {
    Ranking::compute().entries
}

/// Net gain of one hand against a uniformly random opponent hand.
pub fn vs_random(h: &[Card]) -> Result<Rational> {
    check_hand(h)?;
    check_distinct(h)?;
    let class = HoleHandClass::of(h[0], h[1]);
    Ok(Ranking::compute().value(class).cloned().expect("all classes ranked"))
}

/// Canonical key of an unordered pair of hands under suit permutation.
fn matchup_key(h1: [Card; 2], h2: [Card; 2]) -> [u8; 4] {
    let mut best = [u8::MAX; 4];
    for p in suit_permutations() {
        let f = |h: [Card; 2]| {
            let mut v = [Card::new(h[0].rank(), p[h[0].suit() as usize]).index(), Card::new(h[1].rank(), p[h[1].suit() as usize]).index()];
            v.sort_unstable();
            v
        };
        let (a, b) = (f(h1), f(h2));
        let key = if a <= b { [a[0], a[1], b[0], b[1]] } else { [b[0], b[1], a[0], a[1]] };
        best = best.min(key);
    }
    best
}

/// Number of heads-up matchups distinct up to suit permutation and
/// exchanging the players.
pub fn matchup_class_count() -> usize {
    let deck: Vec<Card> = Card::deck().collect();
    let hands: Vec<[Card; 2]> = {
        let mut v = Vec::new();
        crate::cards::for_each_combination(52, 2, |i| v.push([deck[i[0]], deck[i[1]]]));
        v
    };
    let mut seen = HashSet::new();
    for (i, &h1) in hands.iter().enumerate() {
        for &h2 in &hands[i + 1..] {
            if h1.iter().any(|c| h2.contains(c)) {
                continue;
            }
            seen.insert(matchup_key(h1, h2));
        }
    }
    seen.len()
}

/// Seeded Monte Carlo net gain of `hand` against `opponents` random hands,
/// everyone posting one big blind and checking to showdown.
pub fn simulate_vs_random(hand: &[Card], opponents: usize, trials: u64, seed: u64) -> Result<f64> {
    check_hand(hand)?;
    check_distinct(hand)?;
    if opponents == 0 || 2 * (opponents + 1) + 5 > 52 {
        return Err(Error::InvalidParameters(format!("{opponents} opponents")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let own = crate::cards::mask_of(hand);
    let mut deck: Vec<u64> = Card::deck().map(|c| c.bit()).filter(|b| own & b == 0).collect();
    let mut total = 0f64;
    let players = opponents as f64 + 1.0;
    for _ in 0..trials {
        let (dealt, _) = deck.partial_shuffle(&mut rng, 2 * opponents + 5);
        let board = dealt[..5].iter().fold(0, |m, b| m | b);
        let me = eval_mask(board | own);
        let mut best_other = None;
        let mut tied = 0;
        for o in 0..opponents {
            let v = eval_mask(board | dealt[5 + 2 * o] | dealt[6 + 2 * o]);
            match best_other.map(|b: crate::cards::HandValue| v.cmp(&b)) {
                None | Some(std::cmp::Ordering::Greater) => {
                    best_other = Some(v);
                    tied = 1;
                }
                Some(std::cmp::Ordering::Equal) => tied += 1,
                Some(std::cmp::Ordering::Less) => {}
            }
        }
        let b = best_other.unwrap();
        total += match me.cmp(&b) {
            std::cmp::Ordering::Greater => players - 1.0,
            std::cmp::Ordering::Equal => players / (tied as f64 + 1.0) - 1.0,
            std::cmp::Ordering::Less => -1.0,
        };
    }
    Ok(total / trials as f64)
}
