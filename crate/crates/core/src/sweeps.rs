//! Grid experiments: gain over (gamma, x0) and (a, b), proportion of Game A
//! against gamma, and side-by-side policy comparisons.
//!
//! Each grid cell gets its own seed derived from the base seed and the cell's
//! flat index, so cells can run in any order and on any number of threads.

use rayon::prelude::*;

use crate::chaos::{Axis, MapKind, MapSpec};
use crate::engine::{run_ensemble, EnsembleStats, SeedSpec};
use crate::error::{Error, Result};
use crate::games::GameParams;
use crate::switching::{game_sequence, proportion_a, Policy};

#[derive(Debug, Clone, PartialEq)]
pub struct GridMeta {
    pub params: GameParams,
    pub n_games: usize,
    pub trials: usize,
    pub seed: SeedSpec,
}

/// Mean final capital on a two-axis grid. `None` marks a cell whose
/// switching source diverged.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub x_axis: Axis,
    pub y_axis: Axis,
    /// Row-major: `cells[i * y_axis.len() + j]` is `(x_axis[i], y_axis[j])`.
    pub cells: Vec<Option<f64>>,
    pub std_err: Vec<Option<f64>>,
    pub meta: GridMeta,
}

impl GridResult {
    pub fn cell(&self, i: usize, j: usize) -> Option<f64> {
        self.cells[i * self.y_axis.len() + j]
    }

    pub fn cell_std_err(&self, i: usize, j: usize) -> Option<f64> {
        self.std_err[i * self.y_axis.len() + j]
    }

    /// `(x, y, gain)` rows in row-major order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, Option<f64>)> + '_ {
        let ny = self.y_axis.len();
        self.cells.iter().enumerate().map(move |(k, &gain)| {
            (self.x_axis.values[k / ny], self.y_axis.values[k % ny], gain)
        })
    }

    /// Coordinates and value of the largest non-diverged cell.
    pub fn argmax(&self) -> Option<(f64, f64, f64)> {
        self.rows()
            .filter_map(|(x, y, g)| g.map(|g| (x, y, g)))
            .max_by(|a, b| a.2.total_cmp(&b.2))
    }
}

fn run_grid<F>(x_axis: &Axis, y_axis: &Axis, meta: GridMeta, make_policy: F) -> Result<GridResult>
where
    F: Fn(f64, f64) -> Result<Policy> + Sync,
{
    let ny = y_axis.len();
    let results: Vec<Option<(f64, f64)>> = (0..x_axis.len() * ny)
        .into_par_iter()
        .map(|k| {
            let policy = make_policy(x_axis.values[k / ny], y_axis.values[k % ny])?;
            let seed = meta.seed.derive(k as u64);
            match run_ensemble(&meta.params, &policy, meta.n_games, meta.trials, &seed) {
                Ok(stats) => Ok(Some((stats.final_mean(), stats.final_std_err()))),
                Err(Error::DivergedOrbit) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    Ok(GridResult {
        x_axis: x_axis.clone(),
        y_axis: y_axis.clone(),
        cells: results.iter().map(|r| r.map(|(g, _)| g)).collect(),
        std_err: results.iter().map(|r| r.map(|(_, s)| s)).collect(),
        meta,
    })
}

/// Gain of chaotic switching driven by `map` over a (gamma, x0) grid.
#[allow(clippy::too_many_arguments)]
pub fn sweep_gamma_x0(
    params: &GameParams,
    map: MapSpec,
    y0: f64,
    normalize: bool,
    gamma_axis: &Axis,
    x0_axis: &Axis,
    n_games: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<GridResult> {
    let meta = GridMeta { params: *params, n_games, trials, seed };
    run_grid(gamma_axis, x0_axis, meta, |gamma, x0| {
        Policy::chaotic(map, x0, y0, gamma, normalize)
    })
}

/// Gain of Henon or Lozi switching over an (a, b) coefficient grid.
#[allow(clippy::too_many_arguments)]
pub fn sweep_ab(
    params: &GameParams,
    kind: MapKind,
    a_axis: &Axis,
    b_axis: &Axis,
    gamma: f64,
    x0: f64,
    y0: f64,
    normalize: bool,
    n_games: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<GridResult> {
    if !kind.is_two_dimensional() {
        return Err(Error::InvalidParameter(format!(
            "a x b sweeps need a two-dimensional map, got {kind}"
        )));
    }
    let meta = GridMeta { params: *params, n_games, trials, seed };
    run_grid(a_axis, b_axis, meta, |a, b| {
        Policy::chaotic(MapSpec::new(kind, a, b)?, x0, y0, gamma, normalize)
    })
}

impl Policy {
    /// The same policy with its threshold replaced. Policies without a
    /// threshold are returned unchanged.
    pub fn with_gamma(&self, gamma: f64) -> Result<Policy> {
        match self {
            Policy::Random { .. } => Policy::random(gamma),
            Policy::Chaotic(src) => Policy::chaotic(src.map, src.x0, src.y0, gamma, src.normalize),
            other => Ok(other.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProportionRow {
    pub label: String,
    pub gamma: f64,
    /// `None` when the switching source diverged.
    pub proportion_a: Option<f64>,
}

/// Fraction of rounds playing Game A for each policy at each gamma.
/// Deterministic policies are measured from their game sequence; random
/// switching from a seeded ensemble.
pub fn proportion_curve(
    params: &GameParams,
    policies: &[(String, Policy)],
    gamma_axis: &Axis,
    n_games: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<Vec<ProportionRow>> {
    if gamma_axis.values.iter().any(|g| !(0.0..=1.0).contains(g)) {
        return Err(Error::InvalidParameter("gamma axis must lie inside [0, 1]".into()));
    }
    let ng = gamma_axis.len();
    (0..policies.len() * ng)
        .into_par_iter()
        .map(|k| {
            let (label, base) = &policies[k / ng];
            let gamma = gamma_axis.values[k % ng];
            let policy = base.with_gamma(gamma)?;
            let measured = if policy.is_deterministic() {
                game_sequence(&policy, n_games).and_then(|seq| proportion_a(&seq))
            } else {
                run_ensemble(params, &policy, n_games, trials, &seed.derive(k as u64))
                    .map(|s| s.proportion_a)
            };
            let proportion_a = match measured {
                Ok(p) => Some(p),
                Err(Error::DivergedOrbit) => None,
                Err(e) => return Err(e),
            };
            Ok(ProportionRow { label: label.clone(), gamma, proportion_a })
        })
        .collect()
}

/// One ensemble per labelled policy; entry `i` is seeded with
/// `seed.derive(i)`.
pub fn compare_policies(
    params: &GameParams,
    configs: &[(String, Policy)],
    n_games: usize,
    trials: usize,
    seed: SeedSpec,
) -> Result<Vec<(String, EnsembleStats)>> {
    configs
        .par_iter()
        .enumerate()
        .map(|(i, (label, policy))| {
            run_ensemble(params, policy, n_games, trials, &seed.derive(i as u64))
                .map(|stats| (label.clone(), stats))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::GameChoice;
    use crate::oracle::{exact_expected_trajectory, policy_expected_trajectory};
    use crate::presets::{FAIR_COMPARISON, HEADLINE};

    fn params() -> GameParams {
        GameParams::default()
    }

    fn logistic4() -> MapSpec {
        MapSpec::one_dimensional(MapKind::Logistic, 4.0).unwrap()
    }

    #[test]
    fn gamma_x0_cells() {
        let gammas = Axis::from_values("gamma", vec![0.5]).unwrap();
        let x0s = Axis::from_values("x0", vec![0.1, 0.75]).unwrap();
        let seed = SeedSpec::new(3);
        let g = params();
        let norm = sweep_gamma_x0(&g, logistic4(), 0.0, true, &gammas, &x0s, 100, 5000, seed).unwrap();
        let raw = sweep_gamma_x0(&g, logistic4(), 0.0, false, &gammas, &x0s, 100, 5000, seed).unwrap();

        assert!(norm.cell(0, 0).unwrap() > 0.0);
        // x0 = 0.75 is a fixed point: normalized it sits at 0.5 (Game A forever),
        // raw it stays above gamma (Game B forever)
        let all_a = exact_expected_trajectory(&g, &[GameChoice::A; 100])[100];
        let all_b = exact_expected_trajectory(&g, &[GameChoice::B; 100])[100];
        let tol = 4.0 * norm.cell_std_err(0, 1).unwrap();
        assert!((norm.cell(0, 1).unwrap() - all_a).abs() < tol);
        let tol = 4.0 * raw.cell_std_err(0, 1).unwrap();
        assert!((raw.cell(0, 1).unwrap() - all_b).abs() < tol);
    }

    #[test]
    fn gamma_zero_column_is_game_b() {
        // raw orbits from these seeds never touch 0, so x <= 0 never holds
        let gammas = Axis::from_values("gamma", vec![0.0]).unwrap();
        let x0s = Axis::from_values("x0", vec![0.1, 0.3, 0.6]).unwrap();
        let g = params();
        let grid = sweep_gamma_x0(&g, logistic4(), 0.0, false, &gammas, &x0s, 100, 3000, SeedSpec::new(8)).unwrap();
        let all_b = exact_expected_trajectory(&g, &[GameChoice::B; 100])[100];
        for j in 0..3 {
            let tol = 4.0 * grid.cell_std_err(0, j).unwrap();
            assert!((grid.cell(0, j).unwrap() - all_b).abs() < tol);
        }
    }

    #[test]
    fn attractor_rows_play_a_single_game() {
        let gammas = Axis::range("gamma", 0.0, 1.0, 0.5).unwrap();
        let x0s = Axis::from_values("x0", vec![0.0, 0.25, 0.5, 0.75]).unwrap();
        let g = params();
        let grid = sweep_gamma_x0(&g, logistic4(), 0.0, true, &gammas, &x0s, 100, 5000, SeedSpec::new(17)).unwrap();
        for (i, &gamma) in gammas.values.iter().enumerate() {
            for (j, &x0) in x0s.values.iter().enumerate() {
                let policy = Policy::chaotic(logistic4(), x0, 0.0, gamma, true).unwrap();
                let games = game_sequence(&policy, 100).unwrap();
                // settled onto one game after at most two rounds
                assert!(games[2..].iter().all(|&x| x == games[2]));
                let exact = exact_expected_trajectory(&g, &games)[100];
                let tol = 4.0 * grid.cell_std_err(i, j).unwrap();
                assert!((grid.cell(i, j).unwrap() - exact).abs() < tol, "gamma={gamma} x0={x0}");
            }
        }
    }

    #[test]
    fn ab_sweep_marks_divergence() {
        let axis = Axis::from_values("a", vec![1.7, 4.0]).unwrap();
        let b_axis = Axis::from_values("b", vec![0.0, 4.0]).unwrap();
        let grid = sweep_ab(&params(), MapKind::Henon, &axis, &b_axis, 0.5, 0.0, 0.0, true, 100, 200, SeedSpec::new(1)).unwrap();
        assert!(grid.cell(0, 0).is_some());
        assert_eq!(grid.cell(1, 1), None);
        assert_eq!(grid.cells.len(), 4);
        assert!(sweep_ab(&params(), MapKind::Tent, &axis, &b_axis, 0.5, 0.0, 0.0, true, 10, 2, SeedSpec::new(1)).is_err());
    }

    #[test]
    fn grids_independent_of_threads() {
        let gammas = Axis::range("gamma", 0.0, 1.0, 0.25).unwrap();
        let x0s = Axis::range("x0", 0.05, 0.95, 0.3).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
                sweep_gamma_x0(&params(), logistic4(), 0.0, true, &gammas, &x0s, 50, 300, SeedSpec::new(4)).unwrap()
            })
        };
        assert_eq!(run(1), run(6));
    }

    #[test]
    fn proportion_rows() {
        let gammas = Axis::range("gamma", 0.0, 1.0, 0.1).unwrap();
        let policies = vec![
            ("random".to_string(), Policy::random(0.5).unwrap()),
            ("logistic".to_string(), FAIR_COMPARISON[0].policy()),
        ];
        let rows = proportion_curve(&params(), &policies, &gammas, 100, 2000, SeedSpec::new(2)).unwrap();
        assert_eq!(rows.len(), 22);
        for row in rows.iter().filter(|r| r.label == "random") {
            assert!((row.proportion_a.unwrap() - row.gamma).abs() < 0.01);
        }
        let logistic: Vec<f64> = rows.iter().filter(|r| r.label == "logistic").map(|r| r.proportion_a.unwrap()).collect();
        assert!(logistic.windows(2).all(|w| w[0] <= w[1]));

        let long = proportion_curve(
            &params(),
            &policies[1..],
            &Axis::from_values("gamma", vec![0.5]).unwrap(),
            10_000,
            1,
            SeedSpec::new(2),
        )
        .unwrap();
        assert!((long[0].proportion_a.unwrap() - 0.5).abs() < 0.02);
    }

    #[test]
    fn gaussian_threshold_gives_half() {
        let gaussian = FAIR_COMPARISON[3];
        let seq = game_sequence(&gaussian.policy(), 10_000).unwrap();
        assert!((proportion_a(&seq).unwrap() - 0.5).abs() < 0.05);
    }

    #[test]
    fn compare_single_games_lose_and_headline_wins() {
        let g = params();
        let configs = vec![
            ("allA".to_string(), Policy::AllA),
            ("allB".to_string(), Policy::AllB),
            ("headline".to_string(), HEADLINE.policy()),
            ("random".to_string(), Policy::random(0.5).unwrap()),
        ];
        let out = compare_policies(&g, &configs, 100, 20_000, SeedSpec::new(6)).unwrap();
        assert_eq!(out.len(), 4);
        assert!(out[0].1.final_mean() < 0.0 && out[1].1.final_mean() < 0.0);
        let best = out.iter().max_by(|a, b| a.1.final_mean().total_cmp(&b.1.final_mean())).unwrap();
        assert_eq!(best.0, "headline");
        let exact = policy_expected_trajectory(&g, &configs[2].1, 100).unwrap()[100];
        assert!((out[2].1.final_mean() - exact).abs() < 4.0 * out[2].1.final_std_err());
    }
}
