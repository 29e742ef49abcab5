//! Rational verification for concurrent games with LTL goals.
//!
//! Goals are translated to deterministic parity automata, the game is turned
//! into a multi-player parity game, and Nash equilibria are searched for by
//! guessing the set of winners, removing everything the losers could exploit
//! and checking the remaining arena for a run that satisfies all winners.

pub mod automata;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod graph;
pub mod ltl;
pub mod solver;
pub mod srml;
pub mod synthesis;
mod syntax;

pub use error::{Error, Result};
