//! Seeded Monte Carlo ensembles.
//!
//! Every trial owns an independent ChaCha8 stream: the generator is seeded
//! from the base seed and trial `i` reads stream `i`. Each round draws two
//! uniforms in a fixed order, the switch draw first and the coin draw
//! second, whatever the policy. Ensemble sums are accumulated as exact
//! integers, so results do not depend on how trials are scheduled across
//! threads.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::games::{play_round, GameChoice, GameParams};
use crate::switching::{decide_game, Policy, PolicyState};

/// SplitMix64 finalizer, used to derive independent seeds for grid cells
/// and comparison entries.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub base_seed: u64,
}

impl SeedSpec {
    pub fn new(base_seed: u64) -> Self {
        SeedSpec { base_seed }
    }

    /// Generator for trial `trial`: ChaCha8 keyed by the base seed, on
    /// stream `trial`.
    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base_seed);
        rng.set_stream(trial);
        rng
    }

    /// A child seed for sub-experiment `index` (grid cell, policy slot).
    pub fn derive(&self, index: u64) -> SeedSpec {
        SeedSpec::new(splitmix64(self.base_seed ^ splitmix64(index)))
    }
}

/// Source of uniform draws in `[0, 1)`.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

impl<R: RngCore> UniformSource for R {
    fn next_uniform(&mut self) -> f64 {
        self.gen::<f64>()
    }
}

/// One trial's capital trajectory (length `n_games + 1`, starting at 0),
/// plus the number of rounds in which Game A was played.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub capital: Vec<i64>,
    pub a_rounds: usize,
}

fn play_trial<S: UniformSource>(
    params: &GameParams,
    policy: &Policy,
    mut state: PolicyState,
    n_games: usize,
    draws: &mut S,
) -> Result<TrialOutcome> {
    let mut capital = Vec::with_capacity(n_games + 1);
    capital.push(0i64);
    let mut current = 0i64;
    let mut a_rounds = 0;
    for _ in 0..n_games {
        let switch_u = draws.next_uniform();
        let coin_u = draws.next_uniform();
        let (game, next) = decide_game(policy, state, switch_u)?;
        state = next;
        if game == GameChoice::A {
            a_rounds += 1;
        }
        current = play_round(params, game, current, coin_u);
        capital.push(current);
    }
    Ok(TrialOutcome { capital, a_rounds })
}

/// Run one trial against an explicit draw source.
pub fn run_trial_with<S: UniformSource>(
    params: &GameParams,
    policy: &Policy,
    n_games: usize,
    draws: &mut S,
) -> Result<TrialOutcome> {
    check_games(n_games)?;
    let state = PolicyState::new(policy, n_games)?;
    play_trial(params, policy, state, n_games, draws)
}

/// Run trial number `trial` of the ensemble keyed by `seed`.
pub fn run_trial(
    params: &GameParams,
    policy: &Policy,
    n_games: usize,
    seed: &SeedSpec,
    trial: u64,
) -> Result<TrialOutcome> {
    run_trial_with(params, policy, n_games, &mut seed.trial_rng(trial))
}

fn check_games(n_games: usize) -> Result<()> {
    if n_games == 0 {
        return Err(Error::InvalidParameter("n_games must be at least 1".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub n_games: usize,
    pub trials: usize,
    /// Mean capital after each round; index 0 is the start.
    pub mean_capital: Vec<f64>,
    /// Standard error of the mean at each round.
    pub std_err: Vec<f64>,
    pub proportion_a: f64,
    /// Endpoint slope `mean_capital[n] / n`.
    pub rate_estimate: f64,
}

impl EnsembleStats {
    pub fn final_mean(&self) -> f64 {
        self.mean_capital[self.n_games]
    }

    pub fn final_std_err(&self) -> f64 {
        self.std_err[self.n_games]
    }
}

#[derive(Debug, Clone)]
struct Accumulator {
    sum: Vec<i64>,
    sum_sq: Vec<u64>,
    a_rounds: u64,
}

impl Accumulator {
    fn new(n_games: usize) -> Self {
        Accumulator {
            sum: vec![0; n_games + 1],
            sum_sq: vec![0; n_games + 1],
            a_rounds: 0,
        }
    }

    fn add(mut self, outcome: &TrialOutcome) -> Self {
        for (k, &c) in outcome.capital.iter().enumerate() {
            self.sum[k] += c;
            self.sum_sq[k] += (c * c) as u64;
        }
        self.a_rounds += outcome.a_rounds as u64;
        self
    }

    fn merge(mut self, other: Accumulator) -> Self {
        self.sum.iter_mut().zip(&other.sum).for_each(|(a, b)| *a += b);
        self.sum_sq.iter_mut().zip(&other.sum_sq).for_each(|(a, b)| *a += b);
        self.a_rounds += other.a_rounds;
        self
    }
}

/// Aggregate `trials` independent trials. Runs on the current rayon pool.
pub fn run_ensemble(
    params: &GameParams,
    policy: &Policy,
    n_games: usize,
    trials: usize,
    seed: &SeedSpec,
) -> Result<EnsembleStats> {
    check_games(n_games)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let initial = PolicyState::new(policy, n_games)?;

    let acc = (0..trials as u64)
        .into_par_iter()
        .try_fold(
            || Accumulator::new(n_games),
            |acc, trial| {
                let mut rng = seed.trial_rng(trial);
                let outcome = play_trial(params, policy, initial.clone(), n_games, &mut rng)?;
                Ok::<_, Error>(acc.add(&outcome))
            },
        )
        .try_reduce(|| Accumulator::new(n_games), |a, b| Ok(a.merge(b)))?;

    let t = trials as i128;
    let mean_capital: Vec<f64> = acc.sum.iter().map(|&s| s as f64 / trials as f64).collect();
    let std_err = acc
        .sum
        .iter()
        .zip(&acc.sum_sq)
        .map(|(&s, &sq)| {
            if trials < 2 {
                return 0.0;
            }
            // sample variance = (T Σc² − (Σc)²) / (T (T − 1)), exact numerator
            let numer = t * sq as i128 - (s as i128) * (s as i128);
            let var = numer as f64 / (t * (t - 1)) as f64;
            (var.max(0.0) / trials as f64).sqrt()
        })
        .collect();
    let proportion_a = acc.a_rounds as f64 / (trials as f64 * n_games as f64);
    let rate_estimate = mean_capital[n_games] / n_games as f64;
    Ok(EnsembleStats {
        n_games,
        trials,
        mean_capital,
        std_err,
        proportion_a,
        rate_estimate,
    })
}
