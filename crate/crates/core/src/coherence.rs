//! De Finetti coherence for the three-bet system on events A and B.
//!
//! Bet 1 is on A at price P(A), bet 2 on A∩B at price P(A∩B), and bet 3 on B
//! given A at price P(B|A), called off when A fails. Over the partition
//! D1 = Aᶜ, D2 = A∩Bᶜ, D3 = A∩B the winnings are `w = M b`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetSystem {
    pub p_a: Rational,
    pub p_ab: Rational,
    pub p_b_given_a: Rational,
}

impl BetSystem {
    pub fn new(p_a: Rational, p_ab: Rational, p_b_given_a: Rational) -> Result<Self> {
        for p in [&p_a, &p_ab, &p_b_given_a] {
            if !p.is_open_unit() {
                return Err(Error::InvalidProbability(p.to_string()));
            }
        }
        Ok(BetSystem { p_a, p_ab, p_b_given_a })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coherence {
    pub coherent: bool,
    pub det: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    SureWin,
    SureLoss,
}

impl Target {
    pub fn winnings(self) -> Vec<Rational> {
        let w = match self {
            Target::SureWin => Rational::one(),
            Target::SureLoss => -Rational::one(),
        };
        vec![w; 3]
    }
}

/// The stake matrix; rows are D1..D3, columns are bets 1..3.
pub fn build_stake_matrix(s: &BetSystem) -> Matrix {
    let one = Rational::one();
    let odds = |p: &Rational| p.recip() - &one;
    Matrix::from_rows(vec![
        vec![-&one, -&one, Rational::zero()],
        vec![odds(&s.p_a), -&one, -&one],
        vec![odds(&s.p_a), odds(&s.p_ab), odds(&s.p_b_given_a)],
    ])
    .expect("3x3")
}

/// The determinant after subtracting row 1 from rows 2 and 3, which leaves
/// `1/(P(A) P(B|A)) - 1/P(A∩B)`.
pub fn det_by_row_operations(s: &BetSystem) -> Rational {
    (&s.p_a * &s.p_b_given_a).recip() - s.p_ab.recip()
}

pub fn is_coherent(s: &BetSystem) -> Coherence {
    let det = build_stake_matrix(s).det();
    let product_law = s.p_ab == &s.p_a * &s.p_b_given_a;
    assert_eq!(
        det.is_zero(),
        product_law,
        "determinant test and product law disagree for {s:?}"
    );
    Coherence { coherent: product_law, det }
}

/// Stakes `b = M⁻¹ w` that guarantee winnings `w` on every cell.
pub fn dutch_book_for(s: &BetSystem, w: &[Rational]) -> Result<Vec<Rational>> {
    if is_coherent(s).coherent {
        return Err(Error::CoherentSystem);
    }
    let m = build_stake_matrix(s);
    let b = m.solve(w)?;
    assert_eq!(m.mul_vec(&b), w, "Dutch book failed to settle exactly");
    Ok(b)
}

pub fn dutch_book(s: &BetSystem, target: Target) -> Result<Vec<Rational>> {
    dutch_book_for(s, &target.winnings())
}
