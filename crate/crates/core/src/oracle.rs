//! Exact rates of winning and expected capital.
//!
//! The per-round win probability depends on capital only through its residue
//! modulo `M`, so the full capital chain collapses to an `M`-state chain over
//! residues. Expected gain per round is `Σ_j π_j (2 w_j − 1)` where `w_j` is
//! the win probability in residue `j`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::games::{win_probability, GameChoice, GameParams};
use crate::switching::{game_sequence, Pattern, Policy};

/// Longest sequence `brute_force_expected` will enumerate.
pub const BRUTE_FORCE_MAX_ROUNDS: usize = 20;

/// Burn-in used when reading a periodic pattern's long-run rate off the
/// exact trajectory.
pub const DEFAULT_PERIODIC_BURN_IN: usize = 200;

/// Win probability in each residue class for one round.
#[derive(Debug, Clone, PartialEq)]
pub struct StepModel {
    pub win_prob_by_residue: Vec<f64>,
}

impl StepModel {
    pub fn modulus(&self) -> usize {
        self.win_prob_by_residue.len()
    }

    /// Expected one-round gain from residue distribution `probs`.
    pub fn expected_gain(&self, probs: &[f64]) -> f64 {
        probs
            .iter()
            .zip(&self.win_prob_by_residue)
            .map(|(pi, w)| pi * (2.0 * w - 1.0))
            .sum()
    }

    /// Push a residue distribution one round forward.
    pub fn advance(&self, probs: &[f64]) -> Vec<f64> {
        let m = self.modulus();
        let mut next = vec![0.0; m];
        for (j, (&pi, &w)) in probs.iter().zip(&self.win_prob_by_residue).enumerate() {
            next[(j + 1) % m] += pi * w;
            next[(j + m - 1) % m] += pi * (1.0 - w);
        }
        next
    }
}

/// What is played on a round, as far as the oracle is concerned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mixture {
    Game(GameChoice),
    /// Game A with probability `gamma`, otherwise Game B.
    Random { gamma: f64 },
}

pub fn step_model(params: &GameParams, mix: Mixture) -> Result<StepModel> {
    let m = params.modulus as usize;
    let game_row = |g: GameChoice| -> Vec<f64> {
        (0..m).map(|j| win_probability(params, g, j as i64)).collect()
    };
    let win_prob_by_residue = match mix {
        Mixture::Game(g) => game_row(g),
        Mixture::Random { gamma } => {
            if !(0.0..=1.0).contains(&gamma) {
                return Err(Error::InvalidParameter(format!("mix weight {gamma} outside [0, 1]")));
            }
            let b = game_row(GameChoice::B);
            b.iter().map(|wb| gamma * params.p + (1.0 - gamma) * wb).collect()
        }
    };
    Ok(StepModel { win_prob_by_residue })
}

/// Residue transition matrix: row `j` moves to `j+1` with probability `w_j`
/// and to `j-1` otherwise (indices mod `M`).
pub fn transition_matrix(model: &StepModel) -> DMatrix<f64> {
    let m = model.modulus();
    let mut p = DMatrix::zeros(m, m);
    for (j, &w) in model.win_prob_by_residue.iter().enumerate() {
        p[(j, (j + 1) % m)] += w;
        p[(j, (j + m - 1) % m)] += 1.0 - w;
    }
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueDistribution {
    pub probs: Vec<f64>,
}

impl ResidueDistribution {
    pub fn point_mass(modulus: usize, residue: usize) -> Self {
        let mut probs = vec![0.0; modulus];
        probs[residue] = 1.0;
        ResidueDistribution { probs }
    }
}

/// Solve `πP = π`, `Σπ = 1` directly: the last balance equation of
/// `(Pᵀ − I)π = 0` is replaced by the normalization row.
pub fn stationary_distribution(p: &DMatrix<f64>) -> Result<ResidueDistribution> {
    let m = p.nrows();
    if m < 2 || p.ncols() != m {
        return Err(Error::InvalidParameter(format!(
            "transition matrix must be square with at least 2 states, got {}x{}",
            p.nrows(),
            p.ncols()
        )));
    }
    let mut system = p.transpose() - DMatrix::<f64>::identity(m, m);
    system.row_mut(m - 1).fill(1.0);
    let mut rhs = DVector::zeros(m);
    rhs[m - 1] = 1.0;

    let lu = system.lu();
    // nalgebra only rejects exact zero pivots, so screen near-singular systems
    // (several closed classes) by the determinant's magnitude as well.
    if lu.determinant().abs() < 1e-12 {
        return Err(Error::SingularChain);
    }
    let pi = lu.solve(&rhs).ok_or(Error::SingularChain)?;
    if pi.iter().any(|&v| !v.is_finite() || v < -1e-9) {
        return Err(Error::SingularChain);
    }
    let mut probs: Vec<f64> = pi.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|v| *v /= total);
    Ok(ResidueDistribution { probs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub rate: f64,
    pub stationary: ResidueDistribution,
}

/// Long-run expected gain per round under a memoryless model.
pub fn exact_rate(model: &StepModel) -> Result<RateReport> {
    let stationary = stationary_distribution(&transition_matrix(model))?;
    let rate = model.expected_gain(&stationary.probs);
    Ok(RateReport { rate, stationary })
}

/// Expected capital after each round when round `k` uses `models[k]`,
/// starting from capital 0. Output has one more entry than `models`.
pub fn expected_trajectory_for_models<'a, I>(modulus: usize, models: I) -> Vec<f64>
where
    I: IntoIterator<Item = &'a StepModel>,
{
    let mut probs = ResidueDistribution::point_mass(modulus, 0).probs;
    let mut expected = 0.0;
    let mut out = vec![0.0];
    for model in models {
        expected += model.expected_gain(&probs);
        probs = model.advance(&probs);
        out.push(expected);
    }
    out
}

/// Expected capital trajectory (length `games.len() + 1`) for a fixed game
/// sequence.
pub fn exact_expected_trajectory(params: &GameParams, games: &[GameChoice]) -> Vec<f64> {
    let a = step_model(params, Mixture::Game(GameChoice::A)).expect("pure game model");
    let b = step_model(params, Mixture::Game(GameChoice::B)).expect("pure game model");
    let models = games.iter().map(|g| match g {
        GameChoice::A => &a,
        GameChoice::B => &b,
    });
    expected_trajectory_for_models(params.modulus as usize, models)
}

/// Exact expected trajectory for any policy. Random switching is handled
/// as a per-round mixture, which is exact because the switch draw is
/// independent of capital.
pub fn policy_expected_trajectory(params: &GameParams, policy: &Policy, n: usize) -> Result<Vec<f64>> {
    match policy {
        Policy::Random { gamma } => {
            let model = step_model(params, Mixture::Random { gamma: *gamma })?;
            Ok(expected_trajectory_for_models(
                params.modulus as usize,
                std::iter::repeat_n(&model, n),
            ))
        }
        _ => Ok(exact_expected_trajectory(params, &game_sequence(policy, n)?)),
    }
}

/// Exact expectation by enumerating all `2^n` win/lose paths on actual
/// capital. Independent of the residue-chain formulation.
pub fn brute_force_expected(params: &GameParams, games: &[GameChoice]) -> Result<f64> {
    if games.len() > BRUTE_FORCE_MAX_ROUNDS {
        return Err(Error::SequenceTooLong {
            max: BRUTE_FORCE_MAX_ROUNDS,
            got: games.len(),
        });
    }
    fn walk(params: &GameParams, games: &[GameChoice], capital: i64, weight: f64) -> f64 {
        match games.split_first() {
            None => weight * capital as f64,
            Some((&game, rest)) => {
                let w = win_probability(params, game, capital);
                walk(params, rest, capital + 1, weight * w)
                    + walk(params, rest, capital - 1, weight * (1.0 - w))
            }
        }
    }
    Ok(walk(params, games, 0, 1.0))
}

/// Long-run rate of a repeating pattern: mean gain per round over whole
/// periods after `burn_in` rounds. The reported distribution is the residue
/// distribution averaged over one period.
pub fn periodic_rate(params: &GameParams, pattern: &Pattern, burn_in: usize) -> Result<RateReport> {
    let period = pattern.len();
    // Several whole periods so the average does not depend on the phase.
    let cycles = (1000 / period).max(1);
    let total = burn_in + cycles * period;
    let games: Vec<GameChoice> = pattern.games().iter().copied().cycle().take(total).collect();
    let traj = exact_expected_trajectory(params, &games);
    let rate = (traj[total] - traj[total - cycles * period]) / (cycles * period) as f64;

    let a = step_model(params, Mixture::Game(GameChoice::A))?;
    let b = step_model(params, Mixture::Game(GameChoice::B))?;
    let m = params.modulus as usize;
    let mut probs = ResidueDistribution::point_mass(m, 0).probs;
    let mut avg = vec![0.0; m];
    for (k, g) in games.iter().enumerate().take(burn_in + period) {
        if k >= burn_in {
            avg.iter_mut().zip(&probs).for_each(|(s, p)| *s += p / period as f64);
        }
        probs = match g {
            GameChoice::A => a.advance(&probs),
            GameChoice::B => b.advance(&probs),
        };
    }
    Ok(RateReport {
        rate,
        stationary: ResidueDistribution { probs: avg },
    })
}
