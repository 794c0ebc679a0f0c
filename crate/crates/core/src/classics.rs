//! Classic probability problems: the Chevalier de Méré's dice questions, the
//! problem of points, and Monty Hall.

use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};

/// Probability of at least one six in `tosses` rolls of one die.
pub fn mere_single_six(tosses: u32) -> Rational {
    Rational::one() - ratio(5, 6).pow(tosses as i32)
}

/// Probability of at least one double six in `tosses` rolls of two dice.
pub fn mere_double_six_in(tosses: u32) -> Rational {
    Rational::one() - ratio(35, 36).pow(tosses as i32)
}

/// The 24-toss case.
pub fn mere_double_six() -> Rational {
    mere_double_six_in(24)
}

/// Probability that A wins a match in which A needs `a` more wins and B
/// needs `b`, each trial won by A with probability `p`.
///
/// The match is settled within `a + b - 1` further trials, and A wins iff A
/// takes at least `a` of them.
pub fn problem_of_points(a: u32, b: u32, p: &Rational) -> Result<Rational> {
    if !p.is_probability() {
        return Err(Error::InvalidParameters(format!("p = {p} outside [0, 1]")));
    }
    if a == 0 || b == 0 {
        return Err(Error::InvalidParameters(
            "both players must need at least one win".into(),
        ));
    }
    let n = (a + b - 1) as u64;
    let q = Rational::one() - p;
    Ok((a as u64..=n)
        .map(|k| binomial(n, k as i64) * p.pow(k as i32) * q.pow((n - k) as i32))
        .sum())
}

/// Win probability for the stay (`switch = false`) or switch strategy.
///
/// Enumerates prize door, initial pick, and the host's reveal; the host
/// opens a goat door other than the pick, choosing uniformly when two are
/// available.
pub fn monty_hall(switch: bool) -> Rational {
    let mut win = Rational::zero();
    for prize in 0..3 {
        for pick in 0..3 {
            let base = ratio(1, 9);
            let options: Vec<usize> = (0..3).filter(|&d| d != pick && d != prize).collect();
            let each = &base / Rational::from(options.len());
            for &open in &options {
                let final_pick = if switch {
                    (0..3).find(|&d| d != pick && d != open).unwrap()
                } else {
                    pick
                };
                if final_pick == prize {
                    win += &each;
                }
            }
        }
    }
    win
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mere() {
        assert_eq!(mere_single_six(4), ratio(671, 1296));
        assert_eq!(mere_double_six_in(0), Rational::zero());
        assert!(mere_double_six() < ratio(1, 2));
        assert!(mere_double_six_in(25) > ratio(1, 2));
        assert_eq!(mere_double_six().to_decimal(4), "0.4914");
    }

    fn brute_force_points(a: u32, b: u32) -> Rational {
        let n = a + b - 1;
        let mut wins = 0u32;
        for seq in 0u32..(1 << n) {
            if seq.count_ones() >= a {
                wins += 1;
            }
        }
        Rational::new(wins, 1u32 << n)
    }

    #[test]
    fn points() {
        let half = ratio(1, 2);
        assert_eq!(problem_of_points(1, 1, &half).unwrap(), half);
        assert_eq!(problem_of_points(2, 3, &half).unwrap(), ratio(11, 16));
        for a in 1..6 {
            for b in 1..6 {
                assert_eq!(problem_of_points(a, b, &half).unwrap(), brute_force_points(a, b));
            }
        }
        assert_eq!(problem_of_points(3, 4, &Rational::one()).unwrap(), Rational::one());
        assert!(problem_of_points(1, 1, &ratio(3, 2)).is_err());
    }

    #[test]
    fn monty() {
        assert_eq!(monty_hall(true), ratio(2, 3));
        assert_eq!(monty_hall(false), ratio(1, 3));
        assert_eq!(monty_hall(true) + monty_hall(false), Rational::one());
    }
}
