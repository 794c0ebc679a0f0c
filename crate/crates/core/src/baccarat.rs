//! Baccarat and chemin de fer under an infinite-deck shoe.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gametheory::{AnyGame, BimatrixGame, MatrixGame};
use crate::matrix::Matrix;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Draw,
    Stand,
}

impl Action {
    pub fn letter(self) -> char {
        match self {
            Action::Draw => 'D',
            Action::Stand => 'S',
        }
    }
}

/// Card values drawn with replacement: 0 with probability 4/13 (tens and
/// faces), each of 1..9 with probability 1/13.
#[derive(Debug, Clone, Copy, Default)]
pub struct InfiniteDeck;

impl InfiniteDeck {
    pub fn value_probability(v: u8) -> Rational {
        match v {
            0 => Rational::new(4, 13),
            1..=9 => Rational::new(1, 13),
            _ => Rational::zero(),
        }
    }

    pub fn values() -> [Rational; 10] {
        std::array::from_fn(|v| Self::value_probability(v as u8))
    }

    /// Distribution of a two-card total mod 10.
    pub fn two_card_totals() -> [Rational; 10] {
        let v = Self::values();
        let mut t: [Rational; 10] = std::array::from_fn(|_| Rational::zero());
        for a in 0..10 {
            for b in 0..10 {
                t[(a + b) % 10] += &v[a] * &v[b];
            }
        }
        t
    }
}

/// Banker's drawing table, rows `x = 0..7`, columns `y = 0..9` then `∅`
/// (Player stood).
fn table_cell(x: u8, y: Option<u8>) -> Action {
    const ROWS: [&str; 8] = [
        "DDDDDDDDDDD",
        "DDDDDDDDDDD",
        "DDDDDDDDDDD",
        "DDDDDDDDSDD",
        "SSDDDDDDSSD",
        "SSSSDDDDSSD",
        "SSSSSSDDSSS",
        "SSSSSSSSSSS",
    ];
    let col = y.map_or(10, usize::from);
    match ROWS[x as usize].as_bytes()[col] {
        b'D' => Action::Draw,
        _ => Action::Stand,
    }
}

/// Closed form of the same table on rows 3..6.
pub fn compact_rule(x: u8, y: Option<u8>) -> Action {
    let draw = match (x, y) {
        (0..=2, _) => true,
        (7, _) => false,
        (_, None) => x <= 5,
        (3, Some(9)) => true,
        (_, Some(y)) => 2 * (x as i32 - 3) <= y as i32 && y <= 7,
    };
    if draw {
        Action::Draw
    } else {
        Action::Stand
    }
}

fn check_cell(x: u8, y: Option<u8>) -> Result<()> {
    if x > 7 {
        return Err(Error::InvalidTotal(x));
    }
    if let Some(y) = y {
        if y > 9 {
            return Err(Error::InvalidTotal(y));
        }
    }
    Ok(())
}

/// Banker's mandatory action at total `x` after Player's third card `y`
/// (`None` when Player stood).
pub fn banker_action(x: u8, y: Option<u8>) -> Result<Action> {
    check_cell(x, y)?;
    let a = table_cell(x, y);
    debug_assert_eq!(a, compact_rule(x, y));
    Ok(a)
}

/// The full table as rows of 11 actions.
pub fn banker_table() -> Vec<[Action; 11]> {
    (0..8u8)
        .map(|x| std::array::from_fn(|c| table_cell(x, (c < 10).then_some(c as u8))))
        .collect()
}

/// Banker cells left open by the classical Player constraint.
pub const FREE_CELLS: [(u8, Option<u8>); 4] = [(3, Some(9)), (4, Some(1)), (5, Some(4)), (6, None)];

/// +1, 0, −1 from Banker's side.
fn banker_sign(b: usize, p: usize) -> i64 {
    (b as i64 - p as i64).signum()
}

/// Banker's expectation at `(x, y)` with the given action, when Player
/// draws on 0..4, stands on 6..7 and follows `player_on_5` at 5.
pub fn banker_choice_ev_with(x: u8, y: Option<u8>, action: Action, player_on_5: Action) -> Result<Rational> {
    if x == 8 || x == 9 {
        return Err(Error::UnreachableState(format!("banker total {x} is a natural")));
    }
    check_cell(x, y)?;
    let t = InfiniteDeck::two_card_totals();
    let v = InfiniteDeck::values();
    // Player's two-card totals consistent with the observed draw or stand.
    let player_draws = |p: usize| p <= 4 || (p == 5 && player_on_5 == Action::Draw);
    let totals: Vec<usize> = (0..8).filter(|&p| player_draws(p) == y.is_some()).collect();
    let weight: Rational = totals.iter().map(|&p| t[p].clone()).sum();
    let mut ev = Rational::zero();
    for &p0 in &totals {
        let p = (p0 + y.unwrap_or(0) as usize) % 10;
        let w = &t[p0] / &weight;
        let outcome = match action {
            Action::Stand => Rational::from(banker_sign(x as usize, p)),
            Action::Draw => (0..10)
                .map(|z| &v[z] * Rational::from(banker_sign((x as usize + z) % 10, p)))
                .sum(),
        };
        ev += w * outcome;
    }
    Ok(ev)
}

/// Banker's expectation at `(x, y)` when Player draws on 0..5.
pub fn banker_choice_ev(x: u8, y: Option<u8>, action: Action) -> Result<Rational> {
    banker_choice_ev_with(x, y, action, Action::Draw)
}

/// Probabilities of Player win, Banker win and tie for one coup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoupOutcome {
    pub player: Rational,
    pub banker: Rational,
    pub tie: Rational,
}

/// Full-tree outcome probabilities given Player's action on 5 and Banker's
/// strategy.
pub fn coup_outcome(player_on_5: Action, banker: impl Fn(u8, Option<u8>) -> Action) -> CoupOutcome {
    let t = InfiniteDeck::two_card_totals();
    let v = InfiniteDeck::values();
    // Accumulate Banker-minus-Player outcome probabilities in three bins.
    let mut bins = [Rational::zero(), Rational::zero(), Rational::zero()];
    let mut add = |s: i64, w: Rational| bins[(s + 1) as usize] += w;
    for p0 in 0..10usize {
        for b0 in 0..10usize {
            let w = &t[p0] * &t[b0];
            if p0 >= 8 || b0 >= 8 {
                add(banker_sign(b0, p0), w);
                continue;
            }
            let draws = p0 <= 4 || (p0 == 5 && player_on_5 == Action::Draw);
            if !draws {
                match banker(b0 as u8, None) {
                    Action::Stand => add(banker_sign(b0, p0), w),
                    Action::Draw => {
                        for z in 0..10 {
                            add(banker_sign((b0 + z) % 10, p0), &w * &v[z]);
                        }
                    }
                }
                continue;
            }
            for y in 0..10usize {
                let p = (p0 + y) % 10;
                let wy = &w * &v[y];
                match banker(b0 as u8, Some(y as u8)) {
                    Action::Stand => add(banker_sign(b0, p), wy),
                    Action::Draw => {
                        for z in 0..10 {
                            add(banker_sign((b0 + z) % 10, p), &wy * &v[z]);
                        }
                    }
                }
            }
        }
    }
    let [player, tie, banker] = bins;
    CoupOutcome { player, banker, tie }
}

/// Player-bet expectation at baccarat (both sides follow the mandatory
/// rules, Player drawing on 5).
pub fn player_bet_ev() -> Rational {
    let o = coup_outcome(Action::Draw, |x, y| table_cell(x, y));
    o.player - o.banker
}

/// Banker-bet expectation with the given commission on Banker wins.
pub fn banker_bet_ev(commission: &Rational) -> Rational {
    let o = coup_outcome(Action::Draw, |x, y| table_cell(x, y));
    (Rational::one() - commission) * o.banker - o.player
}

/// Banker's pure strategy over the free cells: bit `k` set means draw at
/// `FREE_CELLS[k]`.
pub fn free_strategy_action(bits: u8, x: u8, y: Option<u8>) -> Action {
    match FREE_CELLS.iter().position(|&c| c == (x, y)) {
        Some(k) if bits & (1 << k) != 0 => Action::Draw,
        Some(_) => Action::Stand,
        None => table_cell(x, y),
    }
}

pub fn free_strategy_label(bits: u8) -> String {
    (0..4)
        .map(|k| if bits & (1 << k) != 0 { 'D' } else { 'S' })
        .collect()
}

/// The chemin de fer game: rows are Player's draw or stand on 5, columns
/// Banker's 16 choices on the free cells, labelled by their actions at
/// (3,9), (4,1), (5,4), (6,∅) in that order. Zero commission gives a
/// zero-sum game in Player expectations; otherwise Banker's wins are
/// scaled by `1 − commission` in Banker's payoffs.
pub fn build_chemin_game(commission: &Rational) -> Result<AnyGame> {
    if commission.is_negative() || *commission >= Rational::one() {
        return Err(Error::InvalidCommission(commission.to_string()));
    }
    let rows_actions = [Action::Draw, Action::Stand];
    let mut a = Matrix::zeros(2, 16);
    let mut b = Matrix::zeros(2, 16);
    for (i, &on5) in rows_actions.iter().enumerate() {
        for bits in 0..16u8 {
            let o = coup_outcome(on5, |x, y| free_strategy_action(bits, x, y));
            a[(i, bits as usize)] = &o.player - &o.banker;
            b[(i, bits as usize)] = (Rational::one() - commission) * &o.banker - &o.player;
        }
    }
    let row_labels = vec!["draw".to_string(), "stand".to_string()];
    let col_labels: Vec<String> = (0..16).map(free_strategy_label).collect();
    if commission.is_zero() {
        Ok(AnyGame::Zero(MatrixGame::new(a, row_labels, col_labels)?))
    } else {
        Ok(AnyGame::General(BimatrixGame::new(a, b, row_labels, col_labels)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gametheory::{reduce_dominance, solve_zero_sum, support_enumeration, verify_minimax, is_equilibrium};
    use crate::rational::ratio;

    fn cells() -> impl Iterator<Item = (u8, Option<u8>)> {
        (0..8u8).flat_map(|x| (0..11u8).map(move |c| (x, (c < 10).then_some(c))))
    }

    #[test]
    fn table_matches_compact_rule() {
        for (x, y) in cells() {
            assert_eq!(table_cell(x, y), compact_rule(x, y), "({x},{y:?})");
        }
        assert_eq!(banker_action(3, Some(8)).unwrap(), Action::Stand);
        assert_eq!(banker_action(6, None).unwrap(), Action::Stand);
        for c in 0..11u8 {
            assert_eq!(banker_action(0, (c < 10).then_some(c)).unwrap(), Action::Draw);
        }
        assert_eq!(banker_action(8, None), Err(Error::InvalidTotal(8)));
    }

    #[test]
    fn deck() {
        let t = InfiniteDeck::two_card_totals();
        assert_eq!(t[0], ratio(25, 169));
        for k in 1..10 {
            assert_eq!(t[k], ratio(16, 169));
        }
        assert_eq!(InfiniteDeck::values().iter().cloned().sum::<Rational>(), Rational::one());
    }

    #[test]
    fn three_eight() {
        assert_eq!(banker_choice_ev(3, Some(8), Action::Draw).unwrap(), ratio(86, 1365));
        assert_eq!(banker_choice_ev(3, Some(8), Action::Stand).unwrap(), ratio(91, 1365));
        assert!(matches!(banker_choice_ev(9, None, Action::Stand), Err(Error::UnreachableState(_))));
    }

    #[test]
    fn stand_on_seven_and_draw_low() {
        for c in 0..11u8 {
            let y = (c < 10).then_some(c);
            for on5 in [Action::Draw, Action::Stand] {
                let d = banker_choice_ev_with(7, y, Action::Draw, on5).unwrap();
                let s = banker_choice_ev_with(7, y, Action::Stand, on5).unwrap();
                assert!(s >= d, "7,{y:?}");
            }
        }
    }

    #[test]
    fn only_free_cells_are_contested() {
        // Outside the free cells the table action is strictly better for
        // Banker whichever way Player plays 5.
        for (x, y) in cells().filter(|&(x, _)| (3..=6).contains(&x)) {
            let free = FREE_CELLS.contains(&(x, y));
            let mut preferred = Vec::new();
            for on5 in [Action::Draw, Action::Stand] {
                let d = banker_choice_ev_with(x, y, Action::Draw, on5).unwrap();
                let s = banker_choice_ev_with(x, y, Action::Stand, on5).unwrap();
                assert_ne!(d, s);
                preferred.push(if d > s { Action::Draw } else { Action::Stand });
            }
            if free {
                assert_ne!(preferred[0], preferred[1], "free cell ({x},{y:?}) not contested");
            } else {
                assert!(preferred.iter().all(|&a| a == table_cell(x, y)), "({x},{y:?})");
            }
        }
    }

    /// Counts every ordered six-card rank sequence.
    fn rank_tree_player_ev() -> Rational {
        let val = |r: usize| if r >= 9 { 0 } else { r + 1 };
        let mut net: i64 = 0;
        for p1 in 0..13 {
            for p2 in 0..13 {
                for b1 in 0..13 {
                    for b2 in 0..13 {
                        let p0 = (val(p1) + val(p2)) % 10;
                        let b0 = (val(b1) + val(b2)) % 10;
                        for c5 in 0..13 {
                            for c6 in 0..13 {
                                let (mut p, mut b) = (p0, b0);
                                if p0 < 8 && b0 < 8 {
                                    if p0 <= 5 {
                                        let y = val(c5);
                                        p = (p0 + y) % 10;
                                        if compact_rule(b0 as u8, Some(y as u8)) == Action::Draw {
                                            b = (b0 + val(c6)) % 10;
                                        }
                                    } else if b0 <= 5 {
                                        b = (b0 + val(c5)) % 10;
                                    }
                                }
                                net += (p as i64 - b as i64).signum();
                            }
                        }
                    }
                }
            }
        }
        Rational::new(net, 13i64.pow(6))
    }

    #[test]
    fn table_strategies_give_player_bet() {
        let ev = player_bet_ev();
        assert_eq!(ev, rank_tree_player_ev());
        let AnyGame::Zero(g) = build_chemin_game(&Rational::zero()).unwrap() else {
            panic!("expected zero-sum")
        };
        let col = g.col_labels.iter().position(|l| l == "DSDS").unwrap();
        assert_eq!(g.payoffs[(0, col)], ev);
        let commission = ratio(1, 20);
        let b = banker_bet_ev(&commission);
        assert!(b < Rational::zero() && b > ev);
    }

    #[test]
    fn chemin_de_fer_solution() {
        let AnyGame::Zero(g) = build_chemin_game(&Rational::zero()).unwrap() else {
            panic!("expected zero-sum")
        };
        let red = reduce_dominance(&g.to_bimatrix());
        assert_eq!((red.game.rows(), red.game.cols()), (2, 10));
        let s = solve_zero_sum(&g).unwrap();
        assert_eq!(s.row_mix, vec![ratio(9, 11), ratio(2, 11)]);
        let support: Vec<(String, Rational)> = s
            .col_mix
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(j, q)| (g.col_labels[j].clone(), q.clone()))
            .collect();
        assert_eq!(
            support,
            vec![("DSDS".to_string(), ratio(1429, 2288)), ("DSDD".to_string(), ratio(859, 2288))]
        );
        assert!(verify_minimax(&g, &s.row_mix, &s.col_mix, &s.value));
    }

    #[test]
    fn commission_bimatrix() {
        let AnyGame::General(g) = build_chemin_game(&ratio(1, 20)).unwrap() else {
            panic!("expected bimatrix")
        };
        let red = reduce_dominance(&g);
        let eq = support_enumeration(&red.game);
        assert!(!eq.solutions.is_empty());
        for s in &eq.solutions {
            assert!(is_equilibrium(&red.game, &s.row_mix, &s.col_mix));
        }
        assert!(build_chemin_game(&Rational::one()).is_err());
    }
}
