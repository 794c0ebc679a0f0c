//! Exact probabilities, expectations, optimal strategies and game-theoretic
//! solutions for casino games.
//!
//! All probabilities are exact [`Rational`]s. Decimal output is produced only
//! at the edges, via [`Rational::to_decimal`].

pub mod baccarat;
pub mod cards;
pub mod classics;
pub mod coherence;
pub mod combin;
pub mod craps;
pub mod distribution;
pub mod error;
pub mod gametheory;
pub mod holdem;
pub mod lotteries;
pub mod matrix;
pub mod rational;
pub mod roulette;
pub mod snackjack;
pub mod systems;
pub mod videopoker;
pub mod wager;

pub use error::{Error, Result};
pub use rational::{ratio, Rational};
