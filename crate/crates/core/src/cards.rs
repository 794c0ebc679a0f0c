//! The 52-card deck, five- and seven-card hand evaluation, suit-permutation
//! classes, and hand probabilities by denomination signature.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::combin::{binomial, multinomial};
use crate::error::{Error, Result};
use crate::rational::Rational;

const RANK_CHARS: &[u8; 13] = b"23456789TJQKA";
const SUIT_CHARS: &[u8; 4] = b"cdhs";

/// A card, indexed `rank * 4 + suit` with rank 0 = deuce .. 12 = ace and
/// suits ordered c, d, h, s.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Card(u8);

impl Card {
    pub fn new(rank: u8, suit: u8) -> Card {
        assert!(rank < 13 && suit < 4);
        Card(rank * 4 + suit)
    }

    pub fn from_index(i: u8) -> Card {
        assert!(i < 52);
        Card(i)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// 0 = deuce .. 12 = ace.
    pub fn rank(self) -> u8 {
        self.0 >> 2
    }

    /// Face value 2..=14.
    pub fn face(self) -> u8 {
        self.rank() + 2
    }

    pub fn suit(self) -> u8 {
        self.0 & 3
    }

    /// Bit in the evaluator's suit-major layout.
    #[inline]
    pub fn bit(self) -> u64 {
        1u64 << (self.suit() as u32 * 16 + self.rank() as u32)
    }

    pub fn deck() -> impl Iterator<Item = Card> {
        (0..52).map(Card)
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            RANK_CHARS[self.rank() as usize] as char,
            SUIT_CHARS[self.suit() as usize] as char
        )
    }
}

impl fmt::Debug for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Card {
    type Err = Error;
    fn from_str(s: &str) -> Result<Card> {
        let b = s.trim().as_bytes();
        let bad = || Error::Parse(format!("bad card {s:?}"));
        let (rank_part, suit) = match b {
            [r, s] => (vec![*r], *s),
            [b'1', b'0', s] => (vec![b'T'], *s),
            _ => return Err(bad()),
        };
        let r = rank_part[0].to_ascii_uppercase();
        let rank = RANK_CHARS.iter().position(|&c| c == r).ok_or_else(bad)?;
        let suit = match suit.to_ascii_lowercase() {
            b'c' => 0,
            b'd' => 1,
            b'h' => 2,
            b's' => 3,
            _ => return Err(bad()),
        };
        Ok(Card::new(rank as u8, suit))
    }
}

impl Serialize for Card {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses cards separated by spaces or commas, or run together ("AsKh").
pub fn parse_cards(s: &str) -> Result<Vec<Card>> {
    let tokens: Vec<&str> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect();
    let mut out = Vec::new();
    for t in tokens {
        if t.len() > 3 && t.len() % 2 == 0 {
            for chunk in t.as_bytes().chunks(2) {
                out.push(std::str::from_utf8(chunk).unwrap().parse()?);
            }
        } else {
            out.push(t.parse()?);
        }
    }
    Ok(out)
}

pub fn check_distinct(cards: &[Card]) -> Result<()> {
    let mut seen = 0u64;
    for &c in cards {
        let b = 1u64 << c.index();
        if seen & b != 0 {
            return Err(Error::DuplicateCard(c.to_string()));
        }
        seen |= b;
    }
    Ok(())
}

pub fn format_cards(cards: &[Card]) -> String {
    cards.iter().map(Card::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    HighCard,
    OnePair,
    TwoPair,
    Trips,
    Straight,
    Flush,
    FullHouse,
    Quads,
    StraightFlush,
    RoyalFlush,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::HighCard,
        Category::OnePair,
        Category::TwoPair,
        Category::Trips,
        Category::Straight,
        Category::Flush,
        Category::FullHouse,
        Category::Quads,
        Category::StraightFlush,
        Category::RoyalFlush,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::HighCard => "high card",
            Category::OnePair => "one pair",
            Category::TwoPair => "two pair",
            Category::Trips => "three of a kind",
            Category::Straight => "straight",
            Category::Flush => "flush",
            Category::FullHouse => "full house",
            Category::Quads => "four of a kind",
            Category::StraightFlush => "straight flush",
            Category::RoyalFlush => "royal flush",
        }
    }
}

/// A totally ordered hand strength: category in bits 20.., then up to five
/// rank nibbles in decreasing significance.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HandValue(pub u32);

impl HandValue {
    pub fn category(self) -> Category {
        Category::ALL[(self.0 >> 20) as usize]
    }

    /// Tiebreak ranks (0 = deuce), most significant first.
    pub fn tiebreak(self) -> Vec<u8> {
        let n = match self.category() {
            Category::HighCard | Category::Flush => 5,
            Category::OnePair => 4,
            Category::TwoPair | Category::Trips => 3,
            Category::FullHouse | Category::Quads => 2,
            Category::Straight | Category::StraightFlush => 1,
            Category::RoyalFlush => 0,
        };
        (0..n).map(|i| ((self.0 >> (16 - 4 * i)) & 0xF) as u8).collect()
    }
}

impl fmt::Debug for HandValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.category(), self.tiebreak())
    }
}

#[inline]
fn pack(cat: Category, ranks: &[u32]) -> HandValue {
    let mut v = (cat as u32) << 20;
    for (i, &r) in ranks.iter().enumerate() {
        v |= r << (16 - 4 * i);
    }
    HandValue(v)
}

#[inline]
fn high_bit(m: u32) -> u32 {
    31 - m.leading_zeros()
}

/// Highest rank of a five-card run in `m`, with the ace also playing low.
#[inline]
fn straight_high(m: u32) -> Option<u32> {
    let x = (m << 1) | ((m >> 12) & 1);
    let run = x & (x >> 1) & (x >> 2) & (x >> 3) & (x >> 4);
    (run != 0).then(|| high_bit(run) + 3)
}

#[inline]
fn top_ranks(mut m: u32, k: usize, out: &mut [u32; 5], start: usize) {
    for slot in out.iter_mut().skip(start).take(k) {
        let h = high_bit(m);
        *slot = h;
        m &= !(1 << h);
    }
}

/// Evaluates the best five-card hand within a set of five to seven cards
/// given in the suit-major bit layout of [`Card::bit`].
#[inline]
pub fn eval_mask(set: u64) -> HandValue {
    let c = (set & 0x1FFF) as u32;
    let d = ((set >> 16) & 0x1FFF) as u32;
    let h = ((set >> 32) & 0x1FFF) as u32;
    let s = ((set >> 48) & 0x1FFF) as u32;
    let mut r = [0u32; 5];
    for m in [c, d, h, s] {
        if m.count_ones() >= 5 {
            return match straight_high(m) {
                Some(12) => HandValue((Category::RoyalFlush as u32) << 20),
                Some(hi) => pack(Category::StraightFlush, &[hi]),
                None => {
                    top_ranks(m, 5, &mut r, 0);
                    pack(Category::Flush, &r)
                }
            };
        }
    }
    let ranks = c | d | h | s;
    let quads = c & d & h & s;
    let three = (c & d & h) | (c & d & s) | (c & h & s) | (d & h & s);
    let two = (c & d) | (c & h) | (c & s) | (d & h) | (d & s) | (h & s);
    if quads != 0 {
        let q = high_bit(quads);
        let k = high_bit(ranks & !(1 << q));
        return pack(Category::Quads, &[q, k]);
    }
    let trips = three;
    let pairs = two & !three;
    if trips != 0 {
        let t = high_bit(trips);
        let rest = (trips & !(1 << t)) | pairs;
        if rest != 0 {
            return pack(Category::FullHouse, &[t, high_bit(rest)]);
        }
    }
    if let Some(hi) = straight_high(ranks) {
        return pack(Category::Straight, &[hi]);
    }
    if trips != 0 {
        let t = high_bit(trips);
        r[0] = t;
        top_ranks(ranks & !(1 << t), 2, &mut r, 1);
        return pack(Category::Trips, &r[..3]);
    }
    if pairs.count_ones() >= 2 {
        let p1 = high_bit(pairs);
        let p2 = high_bit(pairs & !(1 << p1));
        let k = high_bit(ranks & !(1 << p1) & !(1 << p2));
        return pack(Category::TwoPair, &[p1, p2, k]);
    }
    if pairs != 0 {
        let p = high_bit(pairs);
        r[0] = p;
        top_ranks(ranks & !(1 << p), 3, &mut r, 1);
        return pack(Category::OnePair, &r[..4]);
    }
    top_ranks(ranks, 5, &mut r, 0);
    pack(Category::HighCard, &r)
}

pub fn mask_of(cards: &[Card]) -> u64 {
    cards.iter().fold(0, |m, c| m | c.bit())
}

pub fn evaluate5(hand: &[Card]) -> Result<HandValue> {
    if hand.len() != 5 {
        return Err(Error::InvalidParameters(format!("{} cards, need 5", hand.len())));
    }
    check_distinct(hand)?;
    Ok(eval_mask(mask_of(hand)))
}

pub fn evaluate7(hand: &[Card]) -> Result<HandValue> {
    if hand.len() != 7 {
        return Err(Error::InvalidParameters(format!("{} cards, need 7", hand.len())));
    }
    check_distinct(hand)?;
    Ok(eval_mask(mask_of(hand)))
}

/// Best five-card value by trying all 21 subsets; the reference for
/// [`evaluate7`].
pub fn evaluate7_by_subsets(hand: &[Card]) -> HandValue {
    let mut best = HandValue(0);
    for skip1 in 0..7 {
        for skip2 in skip1 + 1..7 {
            let five: Vec<Card> = (0..7)
                .filter(|&i| i != skip1 && i != skip2)
                .map(|i| hand[i])
                .collect();
            best = best.max(eval_mask(mask_of(&five)));
        }
    }
    best
}

/// Numbers of denominations appearing 0, 1, 2, 3 and 4 times in a hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DenominationSignature(pub [u32; 5]);

impl DenominationSignature {
    pub fn new(d: [u32; 5]) -> Result<Self> {
        let total: u32 = d.iter().sum();
        let cards: u32 = d.iter().enumerate().map(|(i, &x)| i as u32 * x).sum();
        if total != 13 || cards != 5 {
            return Err(Error::InvalidSignature(d));
        }
        Ok(DenominationSignature(d))
    }

    pub fn of(hand: &[Card]) -> Self {
        let mut counts = [0u32; 13];
        for c in hand {
            counts[c.rank() as usize] += 1;
        }
        let mut d = [0u32; 5];
        for n in counts {
            d[n as usize] += 1;
        }
        DenominationSignature(d)
    }

    /// Every valid signature of a five-card hand.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::new();
        for d4 in 0..=1 {
            for d3 in 0..=1 {
                for d2 in 0..=2 {
                    let used = 4 * d4 + 3 * d3 + 2 * d2;
                    if used > 5 {
                        continue;
                    }
                    let d1 = 5 - used;
                    let d0 = 13 - d1 - d2 - d3 - d4;
                    out.push(DenominationSignature([d0, d1, d2, d3, d4]));
                }
            }
        }
        out
    }
}

/// `(13; d0..d4) Π C(4, i)^{d_i} / C(52, 5)`.
pub fn signature_probability(d: &DenominationSignature) -> Result<Rational> {
    let d = DenominationSignature::new(d.0)?;
    let parts: Vec<u64> = d.0.iter().map(|&x| x as u64).collect();
    let mut num = multinomial(13, &parts)?;
    for (i, &di) in d.0.iter().enumerate() {
        num *= &binomial(4, i as i64).pow(di as i32);
    }
    Ok(num / binomial(52, 5))
}

/// All 24 permutations of the four suits.
pub fn suit_permutations() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

pub fn permute_suits(cards: &[Card], perm: &[u8; 4]) -> Vec<Card> {
    cards
        .iter()
        .map(|c| Card::new(c.rank(), perm[c.suit() as usize]))
        .collect()
}

fn sorted(mut v: Vec<Card>) -> Vec<Card> {
    v.sort_unstable();
    v
}

/// Lexicographically least sorted form of a hand over all suit permutations.
pub fn suit_canonical(hand: &[Card]) -> Result<Vec<Card>> {
    check_distinct(hand)?;
    Ok(canonical_unchecked(hand))
}

pub(crate) fn canonical_unchecked(hand: &[Card]) -> Vec<Card> {
    suit_permutations()
        .iter()
        .map(|p| sorted(permute_suits(hand, p)))
        .min()
        .expect("24 permutations")
}

/// Iterates over every k-subset of `0..n` as an index vector, in
/// lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// One representative per suit-permutation class of five-card hands, with
/// the number of hands in the class.
pub fn five_card_classes() -> Vec<(Vec<Card>, u32)> {
    // Two hands are suit-equivalent iff their multisets of per-suit rank
    // masks agree, so the sorted masks key the class.
    let mut counts: HashMap<u64, (Vec<Card>, u32)> = HashMap::new();
    for_each_combination(52, 5, |idx| {
        let mut masks = [0u16; 4];
        for &i in idx {
            let c = Card(i as u8);
            masks[c.suit() as usize] |= 1 << c.rank();
        }
        masks.sort_unstable();
        let key = masks.iter().fold(0u64, |k, &m| (k << 16) | m as u64);
        counts
            .entry(key)
            .or_insert_with(|| (idx.iter().map(|&i| Card(i as u8)).collect(), 0))
            .1 += 1;
    });
    let mut v: Vec<(Vec<Card>, u32)> = counts
        .into_values()
        .map(|(hand, n)| (canonical_unchecked(&hand), n))
        .collect();
    v.sort_unstable();
    v
}
