//! Two-player matrix and bimatrix games: iterated strict dominance, exact
//! zero-sum solutions via 2×2 kernels, and Nash equilibria by support
//! enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;

/// Zero-sum game; entries are the row player's payoffs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixGame {
    pub payoffs: Matrix,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BimatrixGame {
    pub a: Matrix,
    pub b: Matrix,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn check_labels(labels: &[String], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::InvalidParameters(format!(
            "{} labels for {n} strategies",
            labels.len()
        )));
    }
    let mut sorted = labels.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != n {
        return Err(Error::InvalidParameters("strategy labels must be unique".into()));
    }
    Ok(())
}

impl MatrixGame {
    pub fn new(payoffs: Matrix, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        if payoffs.rows() == 0 || payoffs.cols() == 0 {
            return Err(Error::InvalidParameters("empty game".into()));
        }
        check_labels(&row_labels, payoffs.rows())?;
        check_labels(&col_labels, payoffs.cols())?;
        Ok(MatrixGame { payoffs, row_labels, col_labels })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        let (r, c) = (m.rows(), m.cols());
        MatrixGame::new(m, default_labels("r", r), default_labels("c", c))
    }

    pub fn to_bimatrix(&self) -> BimatrixGame {
        let mut b = self.payoffs.clone();
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                b[(i, j)] = -&self.payoffs[(i, j)];
            }
        }
        BimatrixGame {
            a: self.payoffs.clone(),
            b,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }
}

impl BimatrixGame {
    pub fn new(a: Matrix, b: Matrix, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::InvalidParameters("payoff matrices differ in shape".into()));
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::InvalidParameters("empty game".into()));
        }
        check_labels(&row_labels, a.rows())?;
        check_labels(&col_labels, a.cols())?;
        Ok(BimatrixGame { a, b, row_labels, col_labels })
    }

    pub fn from_pairs(rows: Vec<Vec<(Rational, Rational)>>) -> Result<Self> {
        let a = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|p| p.0.clone()).collect()).collect())?;
        let b = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|p| p.1.clone()).collect()).collect())?;
        let (r, c) = (a.rows(), a.cols());
        BimatrixGame::new(a, b, default_labels("r", r), default_labels("c", c))
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    fn sub(&self, rows: &[usize], cols: &[usize]) -> BimatrixGame {
        let pick = |m: &Matrix| {
            Matrix::from_rows(
                rows.iter()
                    .map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect())
                    .collect(),
            )
            .unwrap()
        };
        BimatrixGame {
            a: pick(&self.a),
            b: pick(&self.b),
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Row,
    Col,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub side: Side,
    pub removed: String,
    pub dominated_by: String,
}

/// A game after iterated strict dominance, remembering which original
/// strategies survive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduced {
    pub game: BimatrixGame,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub trace: Vec<Elimination>,
}

/// Index of a strategy strictly dominating `i` among `alive`, comparing
/// payoffs `pay(k, j)` over `against`.
fn dominator(
    i: usize,
    alive: &[usize],
    against: &[usize],
    pay: impl Fn(usize, usize) -> Rational,
) -> Option<usize> {
    alive.iter().copied().find(|&k| {
        k != i && against.iter().all(|&j| pay(k, j) > pay(i, j))
    })
}

/// Iterated elimination of strictly dominated pure strategies. At each step
/// the lowest-indexed dominated row is removed, else the lowest-indexed
/// dominated column.
pub fn reduce_dominance(g: &BimatrixGame) -> Reduced {
    reduce_dominance_with(g, |cands| cands[0])
}

/// As [`reduce_dominance`], with `choose` picking which of the currently
/// dominated strategies (encoded as `(is_col, index)`) goes next.
pub fn reduce_dominance_with(
    g: &BimatrixGame,
    mut choose: impl FnMut(&[(bool, usize)]) -> (bool, usize),
) -> Reduced {
    let mut rows: Vec<usize> = (0..g.rows()).collect();
    let mut cols: Vec<usize> = (0..g.cols()).collect();
    let mut trace = Vec::new();
    loop {
        let mut cands = Vec::new();
        let mut by = Vec::new();
        for &i in &rows {
            if let Some(k) = dominator(i, &rows, &cols, |r, c| g.a[(r, c)].clone()) {
                cands.push((false, i));
                by.push(k);
            }
        }
        for &j in &cols {
            if let Some(l) = dominator(j, &cols, &rows, |c, r| g.b[(r, c)].clone()) {
                cands.push((true, j));
                by.push(l);
            }
        }
        if cands.is_empty() {
            break;
        }
        let pick = choose(&cands);
        let pos = cands.iter().position(|&c| c == pick).expect("choice among candidates");
        let (is_col, idx) = pick;
        if is_col {
            cols.retain(|&j| j != idx);
            trace.push(Elimination {
                side: Side::Col,
                removed: g.col_labels[idx].clone(),
                dominated_by: g.col_labels[by[pos]].clone(),
            });
        } else {
            rows.retain(|&i| i != idx);
            trace.push(Elimination {
                side: Side::Row,
                removed: g.row_labels[idx].clone(),
                dominated_by: g.row_labels[by[pos]].clone(),
            });
        }
    }
    Reduced { game: g.sub(&rows, &cols), rows, cols, trace }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedSolution {
    pub row_mix: Vec<Rational>,
    pub col_mix: Vec<Rational>,
    /// Row player's expected payoff.
    pub value: Rational,
    /// Column player's expected payoff; the negated value in zero-sum games.
    pub col_value: Rational,
}

fn expected(m: &Matrix, x: &[Rational], y: &[Rational]) -> Rational {
    let my = m.mul_vec(y);
    x.iter().zip(&my).map(|(a, b)| a * b).sum()
}

fn is_mix(v: &[Rational]) -> bool {
    v.iter().all(|p| !p.is_negative()) && v.iter().sum::<Rational>().is_one()
}

/// Row payoffs `A y` and column payoffs `xᵀ B`.
fn responses(g: &BimatrixGame, x: &[Rational], y: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let ay = g.a.mul_vec(y);
    let xb = (0..g.cols())
        .map(|j| (0..g.rows()).map(|i| &x[i] * &g.b[(i, j)]).sum())
        .collect();
    (ay, xb)
}

/// Exact Nash check: no pure deviation improves either player.
pub fn is_equilibrium(g: &BimatrixGame, x: &[Rational], y: &[Rational]) -> bool {
    if !is_mix(x) || !is_mix(y) || x.len() != g.rows() || y.len() != g.cols() {
        return false;
    }
    let u = expected(&g.a, x, y);
    let v = expected(&g.b, x, y);
    let (ay, xb) = responses(g, x, y);
    ay.iter().all(|r| *r <= u) && xb.iter().all(|c| *c <= v)
}

/// Minimax check: `x` secures at least `value` against every column and
/// `y` holds the row player to at most `value` against every row.
pub fn verify_minimax(g: &MatrixGame, x: &[Rational], y: &[Rational], value: &Rational) -> bool {
    if !is_mix(x) || !is_mix(y) {
        return false;
    }
    let m = &g.payoffs;
    let secures = (0..m.cols()).all(|j| {
        (0..m.rows()).map(|i| &x[i] * &m[(i, j)]).sum::<Rational>() >= *value
    });
    let holds = m.mul_vec(y).iter().all(|r| r <= value);
    secures && holds
}

fn lift(mix: &[Rational], kept: &[usize], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (p, &i) in mix.iter().zip(kept) {
        out[i] = p.clone();
    }
    out
}

/// Mixed solution of a 2×2 zero-sum game without a saddle point:
/// `p = (d − c)/D`, `q = (d − b)/D`, `v = (ad − bc)/D` with
/// `D = a − b − c + d`.
pub fn solve_2x2(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Option<(Rational, Rational, Rational)> {
    let den = a - b - c + d;
    if den.is_zero() {
        return None;
    }
    let p = (d - c) / &den;
    let q = (d - b) / &den;
    let v = (a * d - b * c) / &den;
    (p.is_probability() && q.is_probability()).then_some((p, q, v))
}

/// Exact optimal strategies and value: dominance reduction, then a pure
/// saddle point, then 2×2 kernels in lexicographic order, each candidate
/// verified against the full game.
pub fn solve_zero_sum(g: &MatrixGame) -> Result<MixedSolution> {
    let red = reduce_dominance(&g.to_bimatrix());
    let a = &red.game.a;
    let (m, n) = (a.rows(), a.cols());
    let finish = |x: Vec<Rational>, y: Vec<Rational>, v: Rational| -> Option<MixedSolution> {
        let x = lift(&x, &red.rows, g.payoffs.rows());
        let y = lift(&y, &red.cols, g.payoffs.cols());
        verify_minimax(g, &x, &y, &v).then(|| MixedSolution {
            row_mix: x,
            col_mix: y,
            col_value: -&v,
            value: v,
        })
    };
    let unit = |k: usize, len: usize| -> Vec<Rational> {
        (0..len).map(|i| if i == k { Rational::one() } else { Rational::zero() }).collect()
    };
    // Pure saddle points.
    for i in 0..m {
        for j in 0..n {
            let v = &a[(i, j)];
            let row_min = (0..n).all(|k| a[(i, k)] >= *v);
            let col_max = (0..m).all(|k| a[(k, j)] <= *v);
            if row_min && col_max {
                if let Some(s) = finish(unit(i, m), unit(j, n), v.clone()) {
                    return Ok(s);
                }
            }
        }
    }
    for i1 in 0..m {
        for i2 in i1 + 1..m {
            for j1 in 0..n {
                for j2 in j1 + 1..n {
                    let Some((p, q, v)) =
                        solve_2x2(&a[(i1, j1)], &a[(i1, j2)], &a[(i2, j1)], &a[(i2, j2)])
                    else {
                        continue;
                    };
                    let mut x = vec![Rational::zero(); m];
                    x[i1] = p.clone();
                    x[i2] = Rational::one() - &p;
                    let mut y = vec![Rational::zero(); n];
                    y[j1] = q.clone();
                    y[j2] = Rational::one() - &q;
                    if let Some(s) = finish(x, y, v) {
                        return Ok(s);
                    }
                }
            }
        }
    }
    Err(Error::UnsolvedGame(format!(
        "reduced game is {m}x{n} with no verified 2x2 kernel"
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equilibria {
    pub solutions: Vec<MixedSolution>,
    /// Set when some equilibrium has more pure best responses than its
    /// support size, so equilibria may form a continuum; only vertex
    /// solutions are listed.
    pub degenerate: bool,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    crate::cards::for_each_combination(n, k, |idx| out.push(idx.to_vec()));
    out
}

/// Mix over `support` making the opponent indifferent across
/// `opp_support`; `pay(own, opp)` is the opponent's payoff.
fn indifference(
    support: &[usize],
    opp_support: &[usize],
    pay: impl Fn(usize, usize) -> Rational,
) -> Option<Vec<Rational>> {
    let k = support.len();
    // Unknowns: weights over `support`, then the opponent's common payoff.
    let mut m = Matrix::zeros(k + 1, k + 1);
    let mut rhs = vec![Rational::zero(); k + 1];
    for (r, &o) in opp_support.iter().enumerate() {
        for (c, &s) in support.iter().enumerate() {
            m[(r, c)] = pay(s, o);
        }
        m[(r, k)] = -Rational::one();
    }
    for c in 0..k {
        m[(k, c)] = Rational::one();
    }
    rhs[k] = Rational::one();
    let sol = m.solve(&rhs).ok()?;
    let w = sol[..k].to_vec();
    w.iter().all(|p| !p.is_negative()).then_some(w)
}

/// All Nash equilibria found by enumerating equal-size supports.
pub fn support_enumeration(g: &BimatrixGame) -> Equilibria {
    let (m, n) = (g.rows(), g.cols());
    let mut solutions: Vec<MixedSolution> = Vec::new();
    let mut degenerate = false;
    for k in 1..=m.min(n) {
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let Some(xw) = indifference(&rs, &cs, |i, j| g.b[(i, j)].clone()) else {
                    continue;
                };
                let Some(yw) = indifference(&cs, &rs, |j, i| g.a[(i, j)].clone()) else {
                    continue;
                };
                let x = lift(&xw, &rs, m);
                let y = lift(&yw, &cs, n);
                if !is_equilibrium(g, &x, &y) {
                    continue;
                }
                if solutions.iter().any(|s| s.row_mix == x && s.col_mix == y) {
                    continue;
                }
                let value = expected(&g.a, &x, &y);
                let col_value = expected(&g.b, &x, &y);
                let (ay, xb) = responses(g, &x, &y);
                let row_best = ay.iter().filter(|r| **r == value).count();
                let col_best = xb.iter().filter(|c| **c == col_value).count();
                let row_support = x.iter().filter(|p| !p.is_zero()).count();
                let col_support = y.iter().filter(|p| !p.is_zero()).count();
                if row_best > col_support || col_best > row_support {
                    degenerate = true;
                }
                solutions.push(MixedSolution { row_mix: x, col_mix: y, value, col_value });
            }
        }
    }
    Equilibria { solutions, degenerate }
}

/// Equilibria of a game that reduces to at most 2×2 under strict
/// dominance, reported over the original strategies.
pub fn solve_bimatrix_2x2(g: &BimatrixGame) -> Result<Equilibria> {
    let red = reduce_dominance(g);
    if red.game.rows() > 2 || red.game.cols() > 2 {
        return Err(Error::InvalidParameters(format!(
            "game reduces only to {}x{}",
            red.game.rows(),
            red.game.cols()
        )));
    }
    let eq = support_enumeration(&red.game);
    let solutions = eq
        .solutions
        .into_iter()
        .map(|s| MixedSolution {
            row_mix: lift(&s.row_mix, &red.rows, g.rows()),
            col_mix: lift(&s.col_mix, &red.cols, g.cols()),
            value: s.value,
            col_value: s.col_value,
        })
        .collect::<Vec<_>>();
    for s in &solutions {
        assert!(is_equilibrium(g, &s.row_mix, &s.col_mix));
    }
    Ok(Equilibria { solutions, degenerate: eq.degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotConvention {
    /// The pot belongs to neither player until won.
    PotNeutral,
    /// Each player's ante is still counted as their own.
    PotOwned,
}

/// The basic poker endgame after player 1's dominated check-with-a-winner
/// strategies are removed. Both ante `a`; player 1 holds the winning hand
/// with probability `P`, and may bet `b` when holding the loser. Rows:
/// player 1 checks or bets when losing (always bets a winner); columns:
/// player 2 folds or calls a bet.
pub fn basic_endgame(a: &Rational, b: &Rational, p: &Rational, convention: PotConvention) -> Result<BimatrixGame> {
    if !a.is_positive() || !b.is_positive() || !p.is_open_unit() {
        return Err(Error::InvalidParameters(format!(
            "need a > 0, b > 0, 0 < P < 1 (got a = {a}, b = {b}, P = {p})"
        )));
    }
    let one = Rational::one();
    let q = &one - p;
    let two_a = Rational::from(2) * a;
    let pot_bet = &two_a + b;
    let mut cells = vec![
        // check-if-loser, fold
        vec![
            (&two_a * p, &two_a * &q),
            // check-if-loser, call
            (p * &pot_bet, -(b * p) + &two_a * &q),
        ],
        vec![
            // bet-if-loser, fold
            (two_a.clone(), Rational::zero()),
            // bet-if-loser, call
            (p * &pot_bet - &q * b, -(p * b) + &q * &pot_bet),
        ],
    ];
    if convention == PotConvention::PotOwned {
        for row in &mut cells {
            for cell in row.iter_mut() {
                cell.0 -= a;
                cell.1 -= a;
            }
        }
    }
    let mut g = BimatrixGame::from_pairs(cells)?;
    g.row_labels = vec!["check-if-loser".into(), "bet-if-loser".into()];
    g.col_labels = vec!["fold".into(), "call".into()];
    Ok(g)
}

/// Game description as read from a file.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct GameFile {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub payoffs: Vec<Vec<Cell>>,
    #[serde(default)]
    pub zero_sum: bool,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Single(Rational),
    Pair([Rational; 2]),
}

pub enum AnyGame {
    Zero(MatrixGame),
    General(BimatrixGame),
}

impl GameFile {
    pub fn into_game(self) -> Result<AnyGame> {
        if self.zero_sum {
            let rows = self
                .payoffs
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|c| match c {
                            Cell::Single(v) => Ok(v),
                            Cell::Pair(_) => Err(Error::Parse(
                                "zero-sum games take one payoff per cell".into(),
                            )),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyGame::Zero(MatrixGame::new(Matrix::from_rows(rows)?, self.rows, self.cols)?))
        } else {
            let pairs = self
                .payoffs
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|c| match c {
                            Cell::Pair([x, y]) => Ok((x, y)),
                            Cell::Single(_) => Err(Error::Parse(
                                "bimatrix games take a payoff pair per cell".into(),
                            )),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut g = BimatrixGame::from_pairs(pairs)?;
            check_labels(&self.rows, g.rows())?;
            check_labels(&self.cols, g.cols())?;
            g.row_labels = self.rows;
            g.col_labels = self.cols;
            Ok(AnyGame::General(g))
        }
    }
}
