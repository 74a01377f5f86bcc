//! Switching strategies: which game is played on each round.
//!
//! Chaotic switching compares a value of the driving orbit against the
//! threshold `gamma` and plays Game A when `x <= gamma`. Round `k`
//! (1-based) reads the orbit value after `k - 1` iterations, so the initial
//! condition decides the first round.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::chaos::{normalize_orbit, switching_orbit, MapSpec, DEFAULT_DIVERGENCE_BOUND};
use crate::error::{Error, Result};
use crate::games::GameChoice;

pub const DEFAULT_PERIOD_TRANSIENT: usize = 50;
pub const DEFAULT_MAX_PERIOD: usize = 64;

/// A nonempty repeating block of games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern(Vec<GameChoice>);

impl Pattern {
    pub fn new(games: Vec<GameChoice>) -> Result<Self> {
        if games.is_empty() {
            return Err(Error::MalformedPattern(String::new()));
        }
        Ok(Pattern(games))
    }

    pub fn games(&self) -> &[GameChoice] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True if `other` is a cyclic shift of this block.
    pub fn is_rotation_of(&self, other: &Pattern) -> bool {
        let n = self.len();
        n == other.len()
            && (0..n).any(|shift| (0..n).all(|i| self.0[(i + shift) % n] == other.0[i]))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|g| write!(f, "{g}"))
    }
}

/// Accepts `"AABB"` (any mix of A/B) or the shorthand `"[j,k]"`, meaning
/// `j` A's followed by `k` B's.
impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedPattern(s.to_string());
        let text = s.trim();
        if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let counts: Vec<usize> = inner
                .split(',')
                .map(|part| part.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            let [a_count, b_count] = counts[..] else {
                return Err(bad());
            };
            let mut games = vec![GameChoice::A; a_count];
            games.extend(std::iter::repeat_n(GameChoice::B, b_count));
            return Pattern::new(games).map_err(|_| bad());
        }
        let games = text
            .chars()
            .map(|c| match c {
                'A' | 'a' => Ok(GameChoice::A),
                'B' | 'b' => Ok(GameChoice::B),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(games).map_err(|_| bad())
    }
}

/// Chaotic switching configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaoticSource {
    pub map: MapSpec,
    pub x0: f64,
    pub y0: f64,
    pub gamma: f64,
    pub normalize: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    AllA,
    AllB,
    Random { gamma: f64 },
    Periodic(Pattern),
    Chaotic(ChaoticSource),
}

fn check_gamma(gamma: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&gamma) {
        Ok(gamma)
    } else {
        Err(Error::InvalidParameter(format!("gamma = {gamma} is outside [0, 1]")))
    }
}

impl Policy {
    pub fn random(gamma: f64) -> Result<Self> {
        Ok(Policy::Random { gamma: check_gamma(gamma)? })
    }

    pub fn periodic(pattern: &str) -> Result<Self> {
        Ok(Policy::Periodic(pattern.parse()?))
    }

    pub fn chaotic(map: MapSpec, x0: f64, y0: f64, gamma: f64, normalize: bool) -> Result<Self> {
        if !x0.is_finite() || !y0.is_finite() {
            return Err(Error::InvalidParameter("initial condition must be finite".into()));
        }
        Ok(Policy::Chaotic(ChaoticSource {
            map,
            x0,
            y0,
            gamma: check_gamma(gamma)?,
            normalize,
        }))
    }

    pub fn is_deterministic(&self) -> bool {
        !matches!(self, Policy::Random { .. })
    }

    /// Short human-readable label, e.g. `chaotic-logistic` or `periodic-AABB`.
    pub fn label(&self) -> String {
        match self {
            Policy::AllA => "allA".into(),
            Policy::AllB => "allB".into(),
            Policy::Random { .. } => "random".into(),
            Policy::Periodic(p) => format!("periodic-{p}"),
            Policy::Chaotic(c) => format!("chaotic-{}", c.map.kind),
        }
    }
}

/// Per-run switching state. Chaotic policies precompute their whole
/// driving sequence (normalization needs the realized range), so the state
/// carries a fixed horizon.
#[derive(Debug, Clone)]
pub struct PolicyState {
    step: usize,
    horizon: usize,
    driver: Option<Arc<[f64]>>,
}

impl PolicyState {
    pub fn new(policy: &Policy, horizon: usize) -> Result<Self> {
        let driver = match policy {
            Policy::Chaotic(src) => {
                let orbit =
                    switching_orbit(&src.map, src.x0, src.y0, horizon, DEFAULT_DIVERGENCE_BOUND);
                if orbit.diverged {
                    return Err(Error::DivergedOrbit);
                }
                let orbit = if src.normalize { normalize_orbit(&orbit)? } else { orbit };
                Some(Arc::from(orbit.values))
            }
            _ => None,
        };
        Ok(PolicyState { step: 0, horizon, driver })
    }

    /// Number of decisions taken so far.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// The (possibly normalized) values compared against gamma, for chaotic
    /// policies.
    pub fn driver(&self) -> Option<&[f64]> {
        self.driver.as_deref()
    }
}

/// Choose the game for the next round. `u` is consumed only by random
/// switching (A iff `u <= gamma`).
pub fn decide_game(policy: &Policy, state: PolicyState, u: f64) -> Result<(GameChoice, PolicyState)> {
    if state.step >= state.horizon {
        return Err(Error::HorizonExceeded(state.horizon));
    }
    let game = match policy {
        Policy::AllA => GameChoice::A,
        Policy::AllB => GameChoice::B,
        Policy::Random { gamma } => threshold(u, *gamma),
        Policy::Periodic(p) => p.games()[state.step % p.len()],
        Policy::Chaotic(src) => {
            let driver = state.driver.as_ref().ok_or(Error::DivergedOrbit)?;
            threshold(driver[state.step], src.gamma)
        }
    };
    Ok((game, PolicyState { step: state.step + 1, ..state }))
}

fn threshold(x: f64, gamma: f64) -> GameChoice {
    if x <= gamma {
        GameChoice::A
    } else {
        GameChoice::B
    }
}

/// The first `n` decisions of a deterministic policy.
pub fn game_sequence(policy: &Policy, n: usize) -> Result<Vec<GameChoice>> {
    if !policy.is_deterministic() {
        return Err(Error::NondeterministicPolicy);
    }
    let mut state = PolicyState::new(policy, n)?;
    let mut games = Vec::with_capacity(n);
    for _ in 0..n {
        let (game, next) = decide_game(policy, state, 0.0)?;
        games.push(game);
        state = next;
    }
    Ok(games)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Periodicity {
    pub period: usize,
    pub pattern: Pattern,
}

/// Smallest period `p <= max_period` such that the sequence repeats with
/// period `p` from index `transient` onward.
pub fn detect_period(
    seq: &[GameChoice],
    max_period: usize,
    transient: usize,
) -> Result<Option<Periodicity>> {
    if max_period == 0 {
        return Err(Error::InvalidParameter("max_period must be at least 1".into()));
    }
    let needed = transient + 3 * max_period;
    if seq.len() < needed {
        return Err(Error::InvalidParameter(format!(
            "sequence of length {} is too short: need transient + 3*max_period = {needed}",
            seq.len()
        )));
    }
    let tail = &seq[transient..];
    let found = (1..=max_period).find(|&p| tail.iter().zip(&tail[p..]).all(|(a, b)| a == b));
    Ok(found.map(|period| Periodicity {
        period,
        pattern: Pattern(tail[..period].to_vec()),
    }))
}

pub fn proportion_a(seq: &[GameChoice]) -> Result<f64> {
    if seq.is_empty() {
        return Err(Error::InvalidParameter("proportion of an empty sequence".into()));
    }
    let a = seq.iter().filter(|&&g| g == GameChoice::A).count();
    Ok(a as f64 / seq.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::MapKind;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use GameChoice::{A, B};

    fn logistic(a: f64, x0: f64, gamma: f64, normalize: bool) -> Policy {
        let map = MapSpec::one_dimensional(MapKind::Logistic, a).unwrap();
        Policy::chaotic(map, x0, 0.0, gamma, normalize).unwrap()
    }

    fn seq(s: &str) -> Vec<GameChoice> {
        s.parse::<Pattern>().unwrap().games().to_vec()
    }

    #[test]
    fn chaotic_threshold_rounds() {
        // orbit from 0.1: 0.1, 0.36, 0.9216, ...
        let policy = logistic(4.0, 0.1, 0.5, false);
        let state = PolicyState::new(&policy, 3).unwrap();
        let (g1, state) = decide_game(&policy, state, 0.99).unwrap();
        let (g2, state) = decide_game(&policy, state, 0.99).unwrap();
        let (g3, state) = decide_game(&policy, state, 0.99).unwrap();
        assert_eq!((g1, g2, g3), (A, A, B));
        assert_eq!(state.step(), 3);
        assert!(matches!(decide_game(&policy, state, 0.0), Err(Error::HorizonExceeded(3))));
    }

    #[test]
    fn random_and_periodic_decisions() {
        let policy = Policy::random(1.0).unwrap();
        for u in [0.0, 0.3, 0.999_999] {
            let state = PolicyState::new(&policy, 1).unwrap();
            assert_eq!(decide_game(&policy, state, u).unwrap().0, A);
        }
        let policy = Policy::random(0.5).unwrap();
        let s = || PolicyState::new(&policy, 1).unwrap();
        assert_eq!(decide_game(&policy, s(), 0.5).unwrap().0, A);
        assert_eq!(decide_game(&policy, s(), 0.500_001).unwrap().0, B);

        let policy = Policy::periodic("AABB").unwrap();
        assert_eq!(game_sequence(&policy, 6).unwrap(), vec![A, A, B, B, A, A]);
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(game_sequence(&Policy::AllB, 3).unwrap(), vec![B, B, B]);
        assert_eq!(game_sequence(&Policy::AllA, 2).unwrap(), vec![A, A]);
        let fixed = game_sequence(&logistic(4.0, 0.75, 0.5, false), 50).unwrap();
        assert!(fixed.iter().all(|&g| g == B));
        assert!(matches!(
            game_sequence(&Policy::random(0.5).unwrap(), 3),
            Err(Error::NondeterministicPolicy)
        ));
    }

    #[test]
    fn diverged_source_errors() {
        let henon = MapSpec::new(MapKind::Henon, 4.0, 4.0).unwrap();
        let policy = Policy::chaotic(henon, 0.0, 0.0, 0.5, true).unwrap();
        assert!(matches!(PolicyState::new(&policy, 100), Err(Error::DivergedOrbit)));
        assert!(matches!(game_sequence(&policy, 100), Err(Error::DivergedOrbit)));
    }

    #[test]
    fn headline_sequence_has_period_five() {
        let games = game_sequence(&logistic(3.74, 0.1, 0.5, true), 300).unwrap();
        let found = detect_period(&games, DEFAULT_MAX_PERIOD, DEFAULT_PERIOD_TRANSIENT)
            .unwrap()
            .unwrap();
        assert_eq!(found.period, 5);
        assert!(found.pattern.is_rotation_of(&"ABABB".parse().unwrap()));
    }

    #[test]
    fn detect_period_examples() {
        let alt: Vec<_> = (0..40).map(|i| if i % 2 == 0 { A } else { B }).collect();
        let found = detect_period(&alt, 8, 0).unwrap().unwrap();
        assert_eq!(found.period, 2);
        assert_eq!(found.pattern.games(), &[A, B]);

        let found = detect_period(&[B; 30], 8, 2).unwrap().unwrap();
        assert_eq!(found.period, 1);

        let mut noisy = seq("ABBABABBBAAB");
        noisy.extend(seq("ABAABBBABBAB"));
        assert_eq!(detect_period(&noisy, 4, 0).unwrap(), None);

        assert!(detect_period(&[A; 10], 4, 0).is_err());
    }

    #[test]
    fn pattern_parsing() {
        assert_eq!(seq("[2,2]"), seq("AABB"));
        assert_eq!(seq("[1, 3]"), vec![A, B, B, B]);
        assert_eq!(seq("abab"), vec![A, B, A, B]);
        for bad in ["", "ABC", "[2]", "[0,0]", "[1,2,3]", "[x,1]"] {
            assert!(matches!(bad.parse::<Pattern>(), Err(Error::MalformedPattern(_))), "{bad}");
        }
        assert_eq!("[3,2]".parse::<Pattern>().unwrap().to_string(), "AAABB");
    }

    #[test]
    fn gamma_validation() {
        assert!(Policy::random(1.5).is_err());
        let map = MapSpec::one_dimensional(MapKind::Tent, 1.9).unwrap();
        assert!(Policy::chaotic(map, 0.1, 0.0, -0.1, true).is_err());
    }

    #[test]
    fn proportion_examples() {
        assert_eq!(proportion_a(&seq("AABB")).unwrap(), 0.5);
        assert!(proportion_a(&[]).is_err());

        let policy = Policy::random(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 1_000_000;
        let mut state = PolicyState::new(&policy, n).unwrap();
        let mut games = Vec::with_capacity(n);
        for _ in 0..n {
            let (g, next) = decide_game(&policy, state, rng.gen()).unwrap();
            games.push(g);
            state = next;
        }
        assert!((proportion_a(&games).unwrap() - 0.5).abs() < 0.002);
    }

    #[test]
    fn proportion_monotone_in_gamma() {
        let mut last = 0.0;
        for i in 0..=20 {
            let gamma = i as f64 / 20.0;
            let games = game_sequence(&logistic(4.0, 0.1, gamma, true), 2000).unwrap();
            let prop = proportion_a(&games).unwrap();
            assert!(prop >= last);
            last = prop;
        }
        assert_eq!(last, 1.0);
    }

    proptest! {
        #[test]
        fn deterministic_policies_ignore_draw(
            a in 3.5f64..4.0, x0 in 0.01f64..0.99, gamma in 0.0f64..1.0,
            u1 in 0.0f64..1.0, u2 in 0.0f64..1.0, n in 1usize..50,
        ) {
            let policy = logistic(a, x0, gamma, true);
            let mut s1 = PolicyState::new(&policy, n).unwrap();
            let mut s2 = s1.clone();
            for _ in 0..n {
                let (g1, n1) = decide_game(&policy, s1, u1).unwrap();
                let (g2, n2) = decide_game(&policy, s2, u2).unwrap();
                prop_assert_eq!(g1, g2);
                s1 = n1;
                s2 = n2;
            }
        }

        #[test]
        fn periodic_proportion_exact(pattern in "[AB]{1,8}", reps in 1usize..10) {
            let policy = Policy::periodic(&pattern).unwrap();
            let n = pattern.len() * reps;
            let got = proportion_a(&game_sequence(&policy, n).unwrap()).unwrap();
            let want = pattern.chars().filter(|&c| c == 'A').count() as f64 / pattern.len() as f64;
            prop_assert_eq!(got, want);
        }

        #[test]
        fn raw_sequences_are_prefix_stable(a in 3.5f64..4.0, x0 in 0.01f64..0.99, n in 1usize..100, k in 0usize..100) {
            let policy = logistic(a, x0, 0.5, false);
            let short = game_sequence(&policy, n).unwrap();
            let long = game_sequence(&policy, n + k).unwrap();
            prop_assert_eq!(&long[..n], &short[..]);
        }
    }
}
