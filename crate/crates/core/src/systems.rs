//! Betting systems for even-money wagers, gambler's ruin, Kelly betting and
//! bold play.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Win,
    Lose,
}

/// What happens when a system calls for more than the house limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitPolicy {
    /// The bet is refused and the system is abandoned.
    #[default]
    Forfeit,
    /// The limit is bet instead.
    Cap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemState {
    /// Stake in units; doubles after a loss, back to one unit after a win.
    Martingale { stake: i128 },
    /// Betting `F_n`.
    Fibonacci { n: u32 },
    Labouchere { list: Vec<i128> },
    /// Stake in units; up one after a loss, down one (not below 1) after
    /// a win.
    Dalembert { level: i128 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettingSystem {
    pub state: SystemState,
    /// Size of one unit.
    pub unit: Rational,
    pub limit: Option<i128>,
    pub policy: LimitPolicy,
    pub stopped: bool,
}

/// `F_n` with `F_1 = F_2 = 1`.
pub fn fibonacci(n: u32) -> i128 {
    let (mut a, mut b) = (0i128, 1i128);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

impl BettingSystem {
    fn with(state: SystemState) -> BettingSystem {
        BettingSystem { state, unit: Rational::one(), limit: None, policy: LimitPolicy::Forfeit, stopped: false }
    }

    pub fn martingale() -> BettingSystem {
        Self::with(SystemState::Martingale { stake: 1 })
    }

    /// Starts by betting `F_n`.
    pub fn fibonacci(n: u32) -> Result<BettingSystem> {
        if n == 0 || n > 150 {
            return Err(Error::InvalidParameters(format!("Fibonacci index {n} must be in 1..=150")));
        }
        Ok(Self::with(SystemState::Fibonacci { n }))
    }

    pub fn labouchere(list: Vec<i128>) -> Result<BettingSystem> {
        if list.is_empty() || list.iter().any(|&x| x <= 0) {
            return Err(Error::InvalidParameters("Labouchere list must be nonempty and positive".into()));
        }
        Ok(Self::with(SystemState::Labouchere { list }))
    }

    pub fn dalembert() -> BettingSystem {
        Self::with(SystemState::Dalembert { level: 1 })
    }

    pub fn with_unit(mut self, unit: Rational) -> Result<Self> {
        if !unit.is_positive() {
            return Err(Error::InvalidParameters(format!("unit {unit} must be positive")));
        }
        self.unit = unit;
        Ok(self)
    }

    pub fn with_limit(mut self, limit: i128, policy: LimitPolicy) -> Result<Self> {
        if limit <= 0 {
            return Err(Error::InvalidParameters(format!("limit {limit} must be positive")));
        }
        self.limit = Some(limit);
        self.policy = policy;
        Ok(self)
    }

    /// The bet the system calls for, in units, before any house limit.
    pub fn raw_bet(&self) -> Result<i128> {
        if self.stopped {
            return Err(Error::SystemStopped);
        }
        Ok(match &self.state {
            SystemState::Martingale { stake } => *stake,
            SystemState::Fibonacci { n } => fibonacci(*n),
            SystemState::Labouchere { list } => match list.as_slice() {
                [] => return Err(Error::SystemStopped),
                [only] => *only,
                [first, .., last] => first + last,
            },
            SystemState::Dalembert { level } => *level,
        })
    }

    /// The bet in units after applying the house limit.
    pub fn next_units(&self) -> Result<i128> {
        let raw = self.raw_bet()?;
        match self.limit {
            Some(limit) if raw > limit => match self.policy {
                LimitPolicy::Forfeit => Err(Error::LimitExceeded { bet: raw.to_string(), limit: limit.to_string() }),
                LimitPolicy::Cap => Ok(limit),
            },
            _ => Ok(raw),
        }
    }

    pub fn next_bet(&self) -> Result<Rational> {
        Ok(Rational::from(self.next_units()?) * &self.unit)
    }

    /// Settles the current bet. Labouchere appends the amount actually
    /// lost.
    pub fn step(&mut self, outcome: Outcome) -> Result<()> {
        let bet = self.next_units()?;
        match (&mut self.state, outcome) {
            (SystemState::Martingale { stake }, Outcome::Win) => *stake = 1,
            (SystemState::Martingale { stake }, Outcome::Lose) => *stake *= 2,
            (SystemState::Fibonacci { n }, Outcome::Win) => {
                if *n <= 2 {
                    self.stopped = true;
                } else {
                    *n -= 2;
                }
            }
            (SystemState::Fibonacci { n }, Outcome::Lose) => *n += 1,
            (SystemState::Labouchere { list }, Outcome::Win) => {
                list.remove(0);
                list.pop();
                if list.is_empty() {
                    self.stopped = true;
                }
            }
            (SystemState::Labouchere { list }, Outcome::Lose) => list.push(bet),
            (SystemState::Dalembert { level }, Outcome::Win) => *level = (*level - 1).max(1),
            (SystemState::Dalembert { level }, Outcome::Lose) => *level += 1,
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimConfig {
    /// Win probability per coup.
    pub p: Rational,
    pub trials: u64,
    pub seed: u64,
    /// Maximum coups per trial.
    pub horizon: u64,
    /// Units available; a trial busts when the next bet exceeds what is left.
    pub bankroll: Option<i128>,
    /// Stop once profit reaches this many units.
    pub target: Option<i128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopCause {
    Target,
    SystemDone,
    Bust,
    Horizon,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub trials: u64,
    pub seed: u64,
    /// Mean profit in units.
    pub mean_profit: f64,
    pub sd_profit: f64,
    /// Half-width of a 95% normal confidence band for the mean.
    pub ci95: f64,
    pub causes: BTreeMap<StopCause, u64>,
    /// Largest bet placed in a trial → number of trials.
    pub max_bets: BTreeMap<i128, u64>,
}

impl SimSummary {
    pub fn max_bet_quantile(&self, q: f64) -> i128 {
        let need = (q * self.trials as f64).ceil() as u64;
        let mut seen = 0;
        for (&bet, &n) in &self.max_bets {
            seen += n;
            if seen >= need {
                return bet;
            }
        }
        *self.max_bets.keys().last().unwrap_or(&0)
    }
}

struct TrialResult {
    profit: i128,
    cause: StopCause,
    max_bet: i128,
}

fn run_trial(system: &BettingSystem, cfg: &SimConfig, p: f64, rng: &mut ChaCha8Rng) -> TrialResult {
    let mut s = system.clone();
    let (mut profit, mut max_bet) = (0i128, 0i128);
    for _ in 0..cfg.horizon {
        if cfg.target.is_some_and(|t| profit >= t) {
            return TrialResult { profit, cause: StopCause::Target, max_bet };
        }
        let bet = match s.next_units() {
            Ok(b) => b,
            Err(Error::SystemStopped) => return TrialResult { profit, cause: StopCause::SystemDone, max_bet },
            Err(_) => return TrialResult { profit, cause: StopCause::Limit, max_bet },
        };
        if cfg.bankroll.is_some_and(|b| b + profit < bet) {
            return TrialResult { profit, cause: StopCause::Bust, max_bet };
        }
        max_bet = max_bet.max(bet);
        let outcome = if rng.gen::<f64>() < p { Outcome::Win } else { Outcome::Lose };
        profit += if outcome == Outcome::Win { bet } else { -bet };
        s.step(outcome).expect("bet was available");
    }
    let cause = if cfg.target.is_some_and(|t| profit >= t) {
        StopCause::Target
    } else if s.stopped {
        StopCause::SystemDone
    } else {
        StopCause::Horizon
    };
    TrialResult { profit, cause, max_bet }
}

/// Seeded Monte Carlo of a betting system. Trial `i` draws from stream `i`
/// of the seeded generator, so results do not depend on threading.
pub fn simulate(system: &BettingSystem, cfg: &SimConfig) -> Result<SimSummary> {
    if !cfg.p.is_open_unit() {
        return Err(Error::InvalidParameters(format!("p = {} must lie in (0, 1)", cfg.p)));
    }
    if cfg.trials == 0 || cfg.horizon == 0 {
        return Err(Error::InvalidParameters("trials and horizon must be positive".into()));
    }
    system.raw_bet()?;
    let p = cfg.p.to_f64();
    let results: Vec<TrialResult> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i);
            run_trial(system, cfg, p, &mut rng)
        })
        .collect();
    let n = cfg.trials as f64;
    let mean = results.iter().map(|r| r.profit as f64).sum::<f64>() / n;
    let var = results.iter().map(|r| (r.profit as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let mut causes = BTreeMap::new();
    let mut max_bets = BTreeMap::new();
    for r in &results {
        *causes.entry(r.cause).or_insert(0) += 1;
        *max_bets.entry(r.max_bet).or_insert(0) += 1;
    }
    Ok(SimSummary {
        trials: cfg.trials,
        seed: cfg.seed,
        mean_profit: mean,
        sd_profit: var.sqrt(),
        ci95: 1.96 * (var / n).sqrt(),
        causes,
        max_bets,
    })
}

/// Probability that a martingale bettor starting at one unit with
/// `2^k − 1` units wins one unit before going broke: `1 − (1 − p)^k`.
pub fn martingale_success(p: &Rational, k: i32) -> Rational {
    Rational::one() - (Rational::one() - p).pow(k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuinProblem {
    pub p: Rational,
    pub q: Rational,
    pub w: u32,
    pub l: u32,
}

impl RuinProblem {
    pub fn new(p: Rational, q: Rational, w: u32, l: u32) -> Result<Self> {
        if !p.is_positive() || !q.is_positive() || &p + &q > Rational::one() {
            return Err(Error::InvalidParameters(format!("need p, q > 0 and p + q <= 1 (p = {p}, q = {q})")));
        }
        if w == 0 || l == 0 {
            return Err(Error::InvalidParameters("W and L must be positive".into()));
        }
        Ok(RuinProblem { p, q, w, l })
    }

    /// Push probability.
    pub fn r(&self) -> Rational {
        Rational::one() - &self.p - &self.q
    }
}

/// Probability of winning `W` units before losing `L`, betting one unit
/// per coup. Pushes only delay play.
pub fn ruin_probability(rp: &RuinProblem) -> Rational {
    let (w, l) = (rp.w as i32, rp.l as i32);
    if rp.p == rp.q {
        return Rational::new(l, l + w);
    }
    let rho = &rp.q / &rp.p;
    (Rational::one() - rho.pow(l)) / (Rational::one() - rho.pow(l + w))
}

/// The same probability from the absorbing chain on fortunes 0..=L+W.
pub fn ruin_by_chain(rp: &RuinProblem) -> Rational {
    let n = (rp.l + rp.w) as usize;
    let r = rp.r();
    // Unknowns x_1..x_{n-1}; x_0 = 0, x_n = 1.
    let m = n - 1;
    let mut a = Matrix::zeros(m, m);
    let mut b = vec![Rational::zero(); m];
    for i in 1..n {
        let row = i - 1;
        a[(row, row)] = Rational::one() - &r;
        if i + 1 < n {
            a[(row, i)] = -rp.p.clone();
        } else {
            b[row] = rp.p.clone();
        }
        if i > 1 {
            a[(row, i - 2)] = -rp.q.clone();
        }
    }
    let x = a.solve(&b).expect("absorbing chain is nonsingular");
    x[rp.l as usize - 1].clone()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Kelly {
    pub fraction: Rational,
    /// Expected log growth per bet at the Kelly fraction.
    pub growth: f64,
}

/// Expected log growth `p ln(1 + b f) + (1 − p) ln(1 − f)`.
pub fn kelly_growth(p: &Rational, b: &Rational, f: &Rational) -> f64 {
    let (p, b, f) = (p.to_f64(), b.to_f64(), f.to_f64());
    p * (b * f).ln_1p() + (1.0 - p) * (-f).ln_1p()
}

/// Kelly fraction `(b p − q)/b` at payoff odds `b`, or 0 without an edge.
pub fn kelly(p: &Rational, b: &Rational) -> Result<Kelly> {
    if !p.is_open_unit() || !b.is_positive() {
        return Err(Error::InvalidParameters(format!("need 0 < p < 1 and b > 0 (p = {p}, b = {b})")));
    }
    let q = Rational::one() - p;
    let f = ((b * p - &q) / b).max(Rational::zero());
    let growth = kelly_growth(p, b, &f);
    Ok(Kelly { fraction: f, growth })
}

/// Bold play: probability of reaching fortune 1 from `f` when staking
/// `min(f, 1 − f)` at win probability `p`. `f` must be a dyadic rational
/// with denominator at most 2^40.
pub fn bold_play(f: &Rational, p: &Rational) -> Result<Rational> {
    if !p.is_open_unit() {
        return Err(Error::InvalidParameters(format!("p = {p} must lie in (0, 1)")));
    }
    if !f.is_probability() {
        return Err(Error::InvalidParameters(format!("fortune {f} must lie in [0, 1]")));
    }
    let d = f.denom();
    let k = d.bits() - 1;
    if d.trailing_zeros() != Some(k) || k > 40 {
        return Err(Error::NonDyadicInput(f.to_string()));
    }
    let q = Rational::one() - p;
    fn go(f: &Rational, p: &Rational, q: &Rational) -> Rational {
        if f.is_zero() || f.is_one() {
            return f.clone();
        }
        let two = Rational::from(2);
        if *f <= Rational::new(1, 2) {
            p * go(&(f * &two), p, q)
        } else {
            p + q * go(&(f * &two - Rational::one()), p, q)
        }
    }
    Ok(go(f, p, &q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    #[test]
    fn rules() {
        let mut lab = BettingSystem::labouchere(vec![1, 2, 3]).unwrap();
        assert_eq!(lab.next_units().unwrap(), 4);
        lab.step(Outcome::Win).unwrap();
        assert_eq!(lab.state, SystemState::Labouchere { list: vec![2] });
        assert_eq!(lab.next_units().unwrap(), 2);
        lab.step(Outcome::Lose).unwrap();
        assert_eq!(lab.state, SystemState::Labouchere { list: vec![2, 2] });
        lab.step(Outcome::Win).unwrap();
        assert!(lab.stopped);
        assert_eq!(lab.next_units(), Err(Error::SystemStopped));

        let mut fib = BettingSystem::fibonacci(5).unwrap();
        assert_eq!(fib.next_units().unwrap(), 5);
        fib.step(Outcome::Lose).unwrap();
        assert_eq!(fib.next_units().unwrap(), 8);
        fib.step(Outcome::Win).unwrap();
        assert_eq!(fib.next_units().unwrap(), 3);
        fib.step(Outcome::Win).unwrap();
        assert_eq!(fib.next_units().unwrap(), 1);
        fib.step(Outcome::Win).unwrap();
        assert!(fib.stopped);

        let mut m = BettingSystem::martingale();
        for k in 0..6 {
            assert_eq!(m.next_units().unwrap(), 1 << k);
            m.step(Outcome::Lose).unwrap();
        }
        m.step(Outcome::Win).unwrap();
        assert_eq!(m.next_units().unwrap(), 1);

        let mut d = BettingSystem::dalembert();
        d.step(Outcome::Win).unwrap();
        assert_eq!(d.next_units().unwrap(), 1);
        d.step(Outcome::Lose).unwrap();
        d.step(Outcome::Lose).unwrap();
        assert_eq!(d.next_units().unwrap(), 3);
    }

    #[test]
    fn house_limit() {
        let mut m = BettingSystem::martingale().with_limit(10, LimitPolicy::Forfeit).unwrap();
        for _ in 0..4 {
            m.step(Outcome::Lose).unwrap();
        }
        assert!(matches!(m.next_units(), Err(Error::LimitExceeded { .. })));
        let mut c = BettingSystem::martingale().with_limit(10, LimitPolicy::Cap).unwrap();
        for _ in 0..4 {
            c.step(Outcome::Lose).unwrap();
        }
        assert_eq!(c.next_units().unwrap(), 10);
        let half = BettingSystem::martingale().with_unit(ratio(1, 2)).unwrap();
        assert_eq!(half.next_bet().unwrap(), ratio(1, 2));
    }

    fn cfg(p: Rational, trials: u64) -> SimConfig {
        SimConfig { p, trials, seed: 42, horizon: 200, bankroll: Some(1000), target: Some(20) }
    }

    #[test]
    fn fair_games_stay_fair() {
        let systems = [
            BettingSystem::martingale(),
            BettingSystem::fibonacci(1).unwrap(),
            BettingSystem::labouchere(vec![1, 2, 3]).unwrap(),
            BettingSystem::dalembert(),
        ];
        for s in systems {
            let r = simulate(&s, &cfg(ratio(1, 2), 20_000)).unwrap();
            let se = r.sd_profit / (r.trials as f64).sqrt();
            assert!(r.mean_profit.abs() < 4.0 * se, "{:?}: {} ± {}", s.state, r.mean_profit, se);
            assert_eq!(r.causes.values().sum::<u64>(), r.trials);
        }
    }

    #[test]
    fn martingale_success_matches_formula() {
        let p = ratio(18, 38);
        for k in [3, 5] {
            let exact = martingale_success(&p, k);
            let c = SimConfig {
                p: p.clone(),
                trials: 100_000,
                seed: 7,
                horizon: 100,
                bankroll: Some((1 << k) - 1),
                target: Some(1),
            };
            let r = simulate(&BettingSystem::martingale(), &c).unwrap();
            let wins = r.causes.get(&StopCause::Target).copied().unwrap_or(0) as f64 / c.trials as f64;
            let pe = exact.to_f64();
            let se = (pe * (1.0 - pe) / c.trials as f64).sqrt();
            assert!((wins - pe).abs() < 4.0 * se, "k={k}: {wins} vs {pe}");
            // Profit is +1 on success and −(2^k − 1) on failure.
            let mean = pe - (1.0 - pe) * ((1 << k) - 1) as f64;
            assert!((r.mean_profit - mean).abs() < 4.0 * r.sd_profit / (c.trials as f64).sqrt());
        }
    }

    #[test]
    fn subfair_martingale_loses() {
        let c = SimConfig {
            p: ratio(18, 38),
            trials: 1_000_000,
            seed: 1,
            horizon: 50,
            bankroll: Some(255),
            target: Some(10),
        };
        let r = simulate(&BettingSystem::martingale(), &c).unwrap();
        let se = r.sd_profit / (c.trials as f64).sqrt();
        assert!(r.mean_profit < -4.0 * se, "{} ± {}", r.mean_profit, se);
        let again = simulate(&BettingSystem::martingale(), &c).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn ruin() {
        let even = RuinProblem::new(ratio(2, 5), ratio(2, 5), 7, 7).unwrap();
        assert_eq!(ruin_probability(&even), ratio(1, 2));
        let pass = RuinProblem::new(ratio(244, 495), ratio(251, 495), 10, 10).unwrap();
        assert_eq!(ruin_probability(&pass), ruin_by_chain(&pass));
        // Pushes drop out.
        let with_push = RuinProblem::new(ratio(1, 3), ratio(1, 2), 4, 6).unwrap();
        let renorm = RuinProblem::new(ratio(2, 5), ratio(3, 5), 4, 6).unwrap();
        assert_eq!(ruin_by_chain(&with_push), ruin_probability(&renorm));
        assert_eq!(ruin_probability(&with_push), ruin_probability(&renorm));
    }

    #[test]
    fn de_moivre_identity() {
        let rp = RuinProblem::new(ratio(9, 19), ratio(10, 19), 5, 8).unwrap();
        let pw = ruin_probability(&rp);
        let rho = &rp.q / &rp.p;
        let b: Rational = (rp.l + 1..=rp.l + rp.w).map(|k| rho.pow(k as i32)).sum();
        let a: Rational = (1..=rp.l).map(|k| rho.pow(k as i32)).sum();
        assert!((&pw * b - (Rational::one() - &pw) * a).is_zero());
    }

    #[test]
    fn kelly_fraction() {
        let k = kelly(&ratio(3, 5), &Rational::one()).unwrap();
        assert_eq!(k.fraction, ratio(1, 5));
        let lo = kelly_growth(&ratio(3, 5), &Rational::one(), &ratio(3, 20));
        let hi = kelly_growth(&ratio(3, 5), &Rational::one(), &ratio(1, 4));
        assert!(k.growth > lo && k.growth > hi);
        assert!(kelly(&ratio(18, 38), &Rational::one()).unwrap().fraction.is_zero());
        assert!(kelly(&Rational::one(), &Rational::one()).is_err());
    }

    #[test]
    fn bold() {
        let p = ratio(18, 38);
        let q = Rational::one() - &p;
        assert_eq!(bold_play(&ratio(1, 2), &p).unwrap(), p);
        assert_eq!(bold_play(&ratio(1, 4), &p).unwrap(), &p * &p);
        // 3/4: win at once, or lose to 1/2 and win from there.
        assert_eq!(bold_play(&ratio(3, 4), &p).unwrap(), &p + &q * &p);
        assert_eq!(bold_play(&ratio(5, 16), &ratio(1, 2)).unwrap(), ratio(5, 16));
        assert!(matches!(bold_play(&ratio(1, 3), &p), Err(Error::NonDyadicInput(_))));
        for k in 1..=5u32 {
            let f = Rational::new(1, 1i64 << k);
            let flat = RuinProblem::new(p.clone(), q.clone(), (1 << k) - 1, 1).unwrap();
            assert!(bold_play(&f, &p).unwrap() >= ruin_probability(&flat));
        }
    }

    proptest! {
        #[test]
        fn ruin_formula_matches_chain(pn in 1i64..20, qn in 1i64..20, rn in 0i64..10, w in 1u32..15, l in 1u32..15) {
            let tot = pn + qn + rn;
            let rp = RuinProblem::new(Rational::new(pn, tot), Rational::new(qn, tot), w, l).unwrap();
            prop_assert_eq!(ruin_probability(&rp), ruin_by_chain(&rp));
        }

        #[test]
        fn labouchere_bookkeeping(list in proptest::collection::vec(1i128..6, 1..5), outcomes in proptest::collection::vec(any::<bool>(), 0..60)) {
            let initial: i128 = list.iter().sum();
            let mut s = BettingSystem::labouchere(list).unwrap();
            let mut profit = 0i128;
            for win in outcomes {
                let Ok(bet) = s.next_units() else { break };
                let before = match &s.state { SystemState::Labouchere { list } => list.len(), _ => unreachable!() };
                s.step(if win { Outcome::Win } else { Outcome::Lose }).unwrap();
                profit += if win { bet } else { -bet };
                let SystemState::Labouchere { list } = &s.state else { unreachable!() };
                if win {
                    prop_assert_eq!(list.len(), before.saturating_sub(2));
                } else {
                    prop_assert_eq!(list.len(), before + 1);
                }
                prop_assert_eq!(list.iter().sum::<i128>() + profit, initial);
            }
        }

        #[test]
        fn bold_fair_is_identity(num in 0i64..=1024) {
            let f = Rational::new(num, 1024);
            prop_assert_eq!(bold_play(&f, &Rational::new(1, 2)).unwrap(), f);
        }
    }
}
