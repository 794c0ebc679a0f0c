//! Craps: the pass line and don't pass, free odds, the shooter's hand as an
//! absorbing Markov chain, and the Fire Bet.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{ratio, Rational};
use crate::wager::{PayoffDistribution, WagerProfile};

pub const POINTS: [u8; 6] = [4, 5, 6, 8, 9, 10];

/// `π_j = (6 − |j − 7|)/36` for a total `j` of two dice, 0 off 2..=12.
pub fn pi(j: u8) -> Rational {
    if !(2..=12).contains(&j) {
        return Rational::zero();
    }
    ratio(6 - (j as i64 - 7).abs(), 36)
}

/// The distribution of the dice total, indexed 2..=12.
pub fn dice_distribution() -> BTreeMap<u8, Rational> {
    (2..=12).map(|j| (j, pi(j))).collect()
}

fn check_point(j: u8) -> Result<()> {
    if POINTS.contains(&j) {
        Ok(())
    } else {
        Err(Error::InvalidPoint(j))
    }
}

/// Probability of rolling `j` before 7.
pub fn p_before_seven(j: u8) -> Result<Rational> {
    check_point(j)?;
    Ok(pi(j) / (pi(j) + pi(7)))
}

/// The same probability from the absorbing chain {rolling, made, sevened}.
pub fn p_before_seven_chain(j: u8) -> Result<Rational> {
    check_point(j)?;
    // x = π_j + (1 − π_j − π_7) x
    let stay = Rational::one() - pi(j) - pi(7);
    let a = Matrix::from_rows(vec![vec![Rational::one() - stay]]).unwrap();
    Ok(a.solve(&[pi(j)])?.remove(0))
}

/// Partial sum of the geometric series `Σ_{k<n} (1−π_j−π_7)^k π_j` together
/// with the exact remainder `(1−π_j−π_7)^n π_j/(π_j+π_7)`.
pub fn p_before_seven_series(j: u8, terms: u32) -> Result<(Rational, Rational)> {
    check_point(j)?;
    let stay = Rational::one() - pi(j) - pi(7);
    let mut partial = Rational::zero();
    let mut pow = Rational::one();
    for _ in 0..terms {
        partial += &pow * pi(j);
        pow = pow * &stay;
    }
    let tail = pow * pi(j) / (pi(j) + pi(7));
    Ok((partial, tail))
}

/// Odds-bet payout per unit on point `j`: 2:1, 3:2 or 6:5.
pub fn true_odds(j: u8) -> Result<Rational> {
    check_point(j)?;
    Ok(pi(7) / pi(j))
}

/// Win probability of the pass line, term by come-out total.
pub fn pass_line_terms() -> Vec<(u8, Rational)> {
    (2..=12)
        .map(|j| {
            let t = match j {
                7 | 11 => pi(j),
                2 | 3 | 12 => Rational::zero(),
                _ => pi(j) * p_before_seven(j).unwrap(),
            };
            (j, t)
        })
        .collect()
}

pub fn pass_line_win_probability() -> Rational {
    pass_line_terms().into_iter().map(|(_, t)| t).sum()
}

pub fn pass_line() -> PayoffDistribution {
    let win = pass_line_win_probability();
    PayoffDistribution::new(
        "pass line",
        vec![
            (Rational::one(), win.clone()),
            (-Rational::one(), Rational::one() - win),
        ],
    )
    .expect("sums to 1")
}

pub fn dont_pass_distribution() -> PayoffDistribution {
    let push = pi(12);
    let come_out_win = pi(2) + pi(3);
    let point_loss: Rational = POINTS
        .iter()
        .map(|&j| pi(j) * p_before_seven(j).unwrap())
        .sum();
    let point_win: Rational = POINTS
        .iter()
        .map(|&j| pi(j) * (Rational::one() - p_before_seven(j).unwrap()))
        .sum();
    let lose = pi(7) + pi(11) + point_loss;
    PayoffDistribution::new(
        "don't pass",
        vec![
            (Rational::one(), come_out_win + point_win),
            (-Rational::one(), lose),
            (Rational::zero(), push),
        ],
    )
    .expect("sums to 1")
}

pub fn dont_pass() -> WagerProfile {
    WagerProfile::simple(dont_pass_distribution(), Rational::one())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddsAnalysis {
    pub multiple: Rational,
    pub ev: Rational,
    pub odds_bet_ev: Rational,
    pub expected_total_bet: Rational,
    pub house_advantage: Rational,
}

/// Pass line with `m`-times free odds, from the closed forms.
pub fn pass_with_odds(m: &Rational) -> Result<OddsAnalysis> {
    if m.is_negative() {
        return Err(Error::InvalidParameters(format!("odds multiple {m} is negative")));
    }
    let ev = ratio(-7, 495);
    let expected_total_bet = Rational::one() + ratio(2, 3) * m;
    Ok(OddsAnalysis {
        multiple: m.clone(),
        house_advantage: -&ev / &expected_total_bet,
        ev,
        odds_bet_ev: Rational::zero(),
        expected_total_bet,
    })
}

/// Full payoff distribution of the pass line plus `m`-times odds, with the
/// expected total amount bet.
pub fn pass_with_odds_distribution(m: &Rational) -> (PayoffDistribution, Rational) {
    let one = Rational::one();
    let mut atoms = vec![(one.clone(), pi(7) + pi(11)), (-&one, pi(2) + pi(3) + pi(12))];
    let mut total_bet = pi(7) + pi(11) + pi(2) + pi(3) + pi(12);
    for &j in &POINTS {
        let win = p_before_seven(j).unwrap();
        let pay = &one + m * true_odds(j).unwrap();
        atoms.push((pay, pi(j) * &win));
        atoms.push((-(&one + m), pi(j) * (&one - win)));
        total_bet += pi(j) * (&one + m);
    }
    (
        PayoffDistribution::new("pass line with odds", atoms)
            .expect("sums to 1")
            .merged(),
        total_bet,
    )
}

/// Expected number of rolls to settle a pass-line bet.
pub fn decision_duration_mean() -> Rational {
    let one = Rational::one();
    one + POINTS
        .iter()
        .map(|&j| pi(j) / (pi(j) + pi(7)))
        .sum::<Rational>()
}

/// The same mean from the fundamental matrix of the decision chain
/// {come-out, on 4, 5, 6, 8, 9, 10}.
pub fn decision_duration_chain() -> Rational {
    let n = 1 + POINTS.len();
    let mut i_minus_q = Matrix::identity(n);
    for (k, &j) in POINTS.iter().enumerate() {
        // come-out -> point j; no come-out roll returns to the come-out.
        i_minus_q[(0, k + 1)] = -pi(j);
        let stay = Rational::one() - pi(j) - pi(7);
        i_minus_q[(k + 1, k + 1)] = Rational::one() - stay;
    }
    let t = i_minus_q.solve(&vec![Rational::one(); n]).unwrap();
    t[0].clone()
}

/// Lumped shooter states; index 4 is the absorbing seven-out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ShooterState {
    ComeOut,
    Point4or10,
    Point5or9,
    Point6or8,
    SevenedOut,
}

#[derive(Debug, Clone)]
pub struct ShooterChain {
    /// 5×5 transition matrix in `ShooterState` order.
    pub transition: Matrix,
}

impl Default for ShooterChain {
    fn default() -> Self {
        Self::new()
    }
}

impl ShooterChain {
    pub fn new() -> Self {
        let mut t = Matrix::zeros(5, 5);
        // From the come-out, 7, 11, 2, 3 and 12 leave the shooter coming out.
        t[(0, 0)] = pi(7) + pi(11) + pi(2) + pi(3) + pi(12);
        for (s, j) in [(1usize, 4u8), (2, 5), (3, 6)] {
            t[(0, s)] = pi(j) * Rational::from(2);
            let made = pi(j);
            let seven = pi(7);
            t[(s, 0)] = made.clone();
            t[(s, 4)] = seven.clone();
            t[(s, s)] = Rational::one() - made - seven;
        }
        t[(4, 4)] = Rational::one();
        ShooterChain { transition: t }
    }

    /// Transient-to-transient block.
    fn q(&self) -> Matrix {
        let rows = (0..4)
            .map(|i| (0..4).map(|j| self.transition[(i, j)].clone()).collect())
            .collect();
        Matrix::from_rows(rows).unwrap()
    }

    /// Probabilities of the transient states after `k` rolls, starting from
    /// the come-out, for k = 0..=n.
    pub fn transient_path(&self, n: usize) -> Vec<[Rational; 4]> {
        let q = self.q();
        let mut v: [Rational; 4] = [Rational::one(), Rational::zero(), Rational::zero(), Rational::zero()];
        let mut out = Vec::with_capacity(n + 1);
        out.push(v.clone());
        for _ in 0..n {
            let mut next: [Rational; 4] = Default::default();
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                for (j, nj) in next.iter_mut().enumerate() {
                    let t = &q[(i, j)];
                    if !t.is_zero() {
                        *nj += vi * t;
                    }
                }
            }
            v = next;
            out.push(v.clone());
        }
        out
    }

    /// `(I − Q)⁻¹ 1` and the second-moment vector, from the come-out.
    fn moments(&self) -> (Rational, Rational) {
        let q = self.q();
        let mut a = Matrix::identity(4);
        for i in 0..4 {
            for j in 0..4 {
                a[(i, j)] -= &q[(i, j)];
            }
        }
        let t = a.solve(&[Rational::one(), Rational::one(), Rational::one(), Rational::one()]).unwrap();
        // E[L²] = ((2N − I) t)_0 = 2 (N t)_0 − t_0
        let nt = a.solve(&t).unwrap();
        let second = Rational::from(2) * &nt[0] - &t[0];
        (t[0].clone(), second)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HandLength {
    /// `pmf[k-1] = P(L = k)` for k = 1..n-1.
    pub pmf_prefix: Vec<Rational>,
    /// `P(L >= n)`.
    pub survival: Rational,
    pub mean: Rational,
}

/// Distribution of the number of rolls in a shooter's hand, through `n`.
pub fn hand_length(n: usize) -> Result<HandLength> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    let chain = ShooterChain::new();
    let path = chain.transient_path(n - 1);
    let alive = |v: &[Rational; 4]| -> Rational { v.iter().sum() };
    let pmf_prefix = path
        .windows(2)
        .map(|w| alive(&w[0]) - alive(&w[1]))
        .collect();
    Ok(HandLength {
        pmf_prefix,
        survival: alive(&path[n - 1]),
        mean: chain.moments().0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HandLengthStats {
    pub mean: Rational,
    pub variance: Rational,
    pub median: usize,
}

pub fn hand_length_stats() -> HandLengthStats {
    let chain = ShooterChain::new();
    let (mean, second) = chain.moments();
    let variance = &second - &mean * &mean;
    let half = ratio(1, 2);
    let mut median = 1;
    for (k, v) in chain.transient_path(200).iter().enumerate() {
        // P(L <= k) = 1 − alive after k rolls
        let cdf = Rational::one() - v.iter().sum::<Rational>();
        if cdf >= half {
            median = k;
            break;
        }
    }
    HandLengthStats { mean, variance, median }
}

/// Distribution of the number of distinct points made in one hand,
/// indexed 0..=6.
pub fn fire_distribution() -> [Rational; 7] {
    // C[S] = absorption distribution from the come-out with made-set S.
    // Within a block the only unknown is C[S]; the point states resolve to
    // either C[S] (point already made), C[S ∪ {p}], or a seven-out.
    let mut c: Vec<[Rational; 7]> = vec![Default::default(); 64];
    let live = ratio(24, 36);
    for s in (0..64usize).rev() {
        let made = s.count_ones() as usize;
        let mut self_coef = live.clone();
        let mut rhs: [Rational; 7] = Default::default();
        for (bit, &p) in POINTS.iter().enumerate() {
            let denom = pi(p) + pi(7);
            let w = pi(p) * pi(p) / &denom;
            let sev = pi(p) * pi(7) / &denom;
            rhs[made] += sev;
            if s & (1 << bit) != 0 {
                self_coef -= w;
            } else {
                let next = &c[s | (1 << bit)];
                for k in 0..7 {
                    rhs[k] += &w * &next[k];
                }
            }
        }
        for k in 0..7 {
            c[s][k] = &rhs[k] / &self_coef;
        }
    }
    c[0].clone()
}

/// Number of states in the Fire Bet chain: every made-set with each of the
/// come-out and six point phases, plus the seven-out.
pub const FIRE_CHAIN_STATES: usize = 64 * 7 + 1;

/// Fire Bet payoff, with net payoffs keyed by the number of distinct points;
/// counts missing from the table lose the stake.
pub fn fire_bet(paytable: &BTreeMap<u8, Rational>) -> Result<PayoffDistribution> {
    if let Some(k) = paytable.keys().find(|&&k| k > 6) {
        return Err(Error::InvalidPaytable(format!("{k} distinct points is impossible")));
    }
    let dist = fire_distribution();
    let atoms = dist
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let pay = paytable.get(&(k as u8)).cloned().unwrap_or_else(|| -Rational::one());
            (pay, p.clone())
        })
        .collect();
    Ok(PayoffDistribution::new("fire bet", atoms)?.merged())
}

/// The common casino Fire Bet table: 4 points pay 24, 5 pay 249, 6 pay 999.
pub fn standard_fire_paytable() -> BTreeMap<u8, Rational> {
    [(4u8, 24), (5, 249), (6, 999)]
        .into_iter()
        .map(|(k, v)| (k, Rational::from(v)))
        .collect()
}

fn roll(rng: &mut ChaCha8Rng) -> u8 {
    rng.gen_range(1..=6) + rng.gen_range(1..=6)
}

/// Tallies from simulated shooter's hands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HandSimulation {
    pub seed: u64,
    pub hands: u64,
    pub total_rolls: u64,
    pub total_rolls_sq: u128,
    pub distinct_points: [u64; 7],
    pub pass_wins: u64,
    pub pass_decisions: u64,
    pub decision_rolls: u64,
}

pub fn simulate_hands(seed: u64, hands: u64) -> HandSimulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sim = HandSimulation {
        seed,
        hands,
        total_rolls: 0,
        total_rolls_sq: 0,
        distinct_points: [0; 7],
        pass_wins: 0,
        pass_decisions: 0,
        decision_rolls: 0,
    };
    for _ in 0..hands {
        let mut rolls = 0u64;
        let mut made = 0u8;
        let mut point: Option<u8> = None;
        let mut since_decision = 0u64;
        loop {
            let t = roll(&mut rng);
            rolls += 1;
            since_decision += 1;
            let decided = match point {
                None => match t {
                    7 | 11 => Some(true),
                    2 | 3 | 12 => Some(false),
                    _ => {
                        point = Some(t);
                        None
                    }
                },
                Some(p) if t == p => {
                    made |= 1 << POINTS.iter().position(|&q| q == p).unwrap();
                    point = None;
                    Some(true)
                }
                Some(_) if t == 7 => Some(false),
                Some(_) => None,
            };
            if let Some(win) = decided {
                sim.pass_decisions += 1;
                sim.pass_wins += win as u64;
                sim.decision_rolls += since_decision;
                since_decision = 0;
                if !win && point.is_some() {
                    break;
                }
            }
        }
        sim.total_rolls += rolls;
        sim.total_rolls_sq += (rolls as u128) * (rolls as u128);
        sim.distinct_points[made.count_ones() as usize] += 1;
    }
    sim
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dice() {
        let d = dice_distribution();
        assert_eq!(d.values().sum::<Rational>(), Rational::one());
        assert_eq!(pi(7), ratio(1, 6));
        assert_eq!(pi(1), Rational::zero());
    }

    #[test]
    fn point_probabilities() {
        assert_eq!(p_before_seven(4).unwrap(), ratio(1, 3));
        assert_eq!(p_before_seven(6).unwrap(), ratio(5, 11));
        assert_eq!(p_before_seven(7), Err(Error::InvalidPoint(7)));
        for j in POINTS {
            let exact = p_before_seven(j).unwrap();
            assert_eq!(p_before_seven_chain(j).unwrap(), exact);
            let (partial, tail) = p_before_seven_series(j, 25).unwrap();
            assert_eq!(partial + tail, exact);
        }
    }

    #[test]
    fn pass_and_dont_pass() {
        let d = pass_line();
        assert_eq!(pass_line_win_probability(), ratio(244, 495));
        assert_eq!(d.expectation(), ratio(-7, 495));
        let dp = dont_pass();
        assert_eq!(dp.push_probability, ratio(1, 36));
        use crate::wager::{Denominator::Initial, Pushes::*};
        assert_eq!(dp.house_advantage(Include, Initial).unwrap(), ratio(27, 1980));
        assert_eq!(dp.house_advantage(Exclude, Initial).unwrap(), ratio(27, 1925));
    }

    #[test]
    fn odds_closed_form_matches_enumeration() {
        for m in [0, 1, 2, 3, 5, 10, 100] {
            let m = Rational::from(m);
            let a = pass_with_odds(&m).unwrap();
            let (dist, total) = pass_with_odds_distribution(&m);
            assert_eq!(dist.expectation(), a.ev);
            assert_eq!(total, a.expected_total_bet);
            assert_eq!(-dist.expectation() / total, a.house_advantage);
        }
        assert_eq!(pass_with_odds(&Rational::one()).unwrap().house_advantage, ratio(7, 825));
        assert!(pass_with_odds(&Rational::from(-1)).is_err());
    }

    #[test]
    fn decision_duration() {
        assert_eq!(decision_duration_mean(), ratio(557, 165));
        assert_eq!(decision_duration_chain(), ratio(557, 165));
    }

    #[test]
    fn chain_rows_are_stochastic() {
        let c = ShooterChain::new();
        for i in 0..5 {
            assert_eq!(c.transition.row(i).iter().sum::<Rational>(), Rational::one());
        }
    }

    #[test]
    fn hand_length_distribution() {
        let h = hand_length(60).unwrap();
        assert_eq!(h.pmf_prefix[0], Rational::zero());
        // Two rolls: point then seven.
        let two: Rational = POINTS.iter().map(|&j| pi(j) * pi(7)).sum();
        assert_eq!(h.pmf_prefix[1], two);
        let total: Rational = h.pmf_prefix.iter().sum::<Rational>() + &h.survival;
        assert_eq!(total, Rational::one());
        assert_eq!(h.mean, ratio(1671, 196));
        let h = hand_length(154).unwrap();
        let odds = 1.0 / h.survival.to_f64();
        assert!((odds / 5.59e9 - 1.0).abs() < 0.01, "{odds}");
    }

    /// Brute-force oracle for one made-set block: solve the 7 transient
    /// states (come-out and six points) as a linear system.
    fn fire_block(s: usize, c: &[[Rational; 7]]) -> [Rational; 7] {
        let made = s.count_ones() as usize;
        let mut out: [Rational; 7] = Default::default();
        for k in 0..7 {
            let mut a = Matrix::identity(7);
            let mut b = vec![Rational::zero(); 7];
            a[(0, 0)] -= ratio(12, 36);
            for (bit, &p) in POINTS.iter().enumerate() {
                a[(0, bit + 1)] -= pi(p);
                let i = bit + 1;
                a[(i, i)] -= Rational::one() - pi(p) - pi(7);
                if k == made {
                    b[i] += pi(7);
                }
                if s & (1 << bit) != 0 {
                    a[(i, 0)] -= pi(p);
                } else {
                    b[i] += pi(p) * &c[s | (1 << bit)][k];
                }
            }
            out[k] = a.solve(&b).unwrap()[0].clone();
        }
        out
    }

    #[test]
    fn fire_matches_block_oracle() {
        let mut c: Vec<[Rational; 7]> = vec![Default::default(); 64];
        for s in (0..64usize).rev() {
            c[s] = fire_block(s, &c);
        }
        let d = fire_distribution();
        assert_eq!(d, c[0]);
        assert_eq!(d.iter().sum::<Rational>(), Rational::one());
        // P(>= k) strictly decreasing
        let tail: Vec<Rational> = (0..7).map(|k| d[k..].iter().sum()).collect();
        for k in 1..6 {
            assert!(tail[k + 1] < tail[k]);
        }
        let six = d[6].to_f64();
        assert!(six > 1.5e-4 && six < 1.7e-4, "{six}");
    }

    #[test]
    fn fire_paytable() {
        let d = fire_bet(&standard_fire_paytable()).unwrap();
        assert!(d.expectation().is_negative());
        let mut bad = standard_fire_paytable();
        bad.insert(7, Rational::one());
        assert!(fire_bet(&bad).is_err());
    }

    #[test]
    fn monte_carlo_agrees() {
        let n = 400_000u64;
        let sim = simulate_hands(7, n);
        let nf = n as f64;
        let mean = sim.total_rolls as f64 / nf;
        let stats = hand_length_stats();
        let sd = stats.variance.to_f64().sqrt() / nf.sqrt();
        assert!((mean - stats.mean.to_f64()).abs() < 4.0 * sd);
        let d = fire_distribution();
        for k in 0..7 {
            let p = d[k].to_f64();
            let se = (p * (1.0 - p) / nf).sqrt();
            let obs = sim.distinct_points[k] as f64 / nf;
            assert!((obs - p).abs() < 4.0 * se + 1e-6, "k={k} obs={obs} p={p}");
        }
        let p = ratio(244, 495).to_f64();
        let dn = sim.pass_decisions as f64;
        let obs = sim.pass_wins as f64 / dn;
        assert!((obs - p).abs() < 4.0 * (p * (1.0 - p) / dn).sqrt());
        let dur = sim.decision_rolls as f64 / dn;
        assert!((dur - ratio(557, 165).to_f64()).abs() < 0.02);
    }
}
