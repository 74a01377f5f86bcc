//! Game A (a single biased coin) and Game B (a coin picked by capital
//! modulo `M`).

use std::fmt;

use crate::error::{Error, Result};

/// Bias used throughout the experiments.
pub const DEFAULT_EPSILON: f64 = 0.005;
pub const DEFAULT_MODULUS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams {
    pub modulus: u32,
    pub epsilon: f64,
    /// Game A win probability.
    pub p: f64,
    /// Game B win probability when capital is a multiple of the modulus.
    pub p1: f64,
    /// Game B win probability otherwise.
    pub p2: f64,
}

impl GameParams {
    /// The canonical parameterization: `p = 1/2 - ε`, `p1 = 1/10 - ε`,
    /// `p2 = 3/4 - ε`.
    pub fn canonical(modulus: u32, epsilon: f64) -> Result<Self> {
        Self::custom(modulus, epsilon, 0.5 - epsilon, 0.1 - epsilon, 0.75 - epsilon)
    }

    pub fn custom(modulus: u32, epsilon: f64, p: f64, p1: f64, p2: f64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidParameter(format!("modulus must be >= 2, got {modulus}")));
        }
        for (name, v) in [("p", p), ("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} is not a probability")));
            }
        }
        Ok(GameParams { modulus, epsilon, p, p1, p2 })
    }

    /// Euclidean remainder of `capital` modulo `M`, always in `0..M`.
    pub fn residue(&self, capital: i64) -> usize {
        capital.rem_euclid(self.modulus as i64) as usize
    }
}

impl Default for GameParams {
    fn default() -> Self {
        Self::canonical(DEFAULT_MODULUS, DEFAULT_EPSILON).expect("default parameters are valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameChoice {
    A,
    B,
}

impl GameChoice {
    pub fn as_char(self) -> char {
        match self {
            GameChoice::A => 'A',
            GameChoice::B => 'B',
        }
    }
}

impl fmt::Display for GameChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

pub fn win_probability(params: &GameParams, game: GameChoice, capital: i64) -> f64 {
    match game {
        GameChoice::A => params.p,
        GameChoice::B if params.residue(capital) == 0 => params.p1,
        GameChoice::B => params.p2,
    }
}

/// One ±1 round. Wins iff `u < win_probability`.
pub fn play_round(params: &GameParams, game: GameChoice, capital: i64, u: f64) -> i64 {
    if u < win_probability(params, game, capital) {
        capital + 1
    } else {
        capital - 1
    }
}
