//! Python module `parrondo`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use parrondo_core::chaos::{self, Axis, MapKind, MapSpec};
use parrondo_core::oracle::{self, Mixture};
use parrondo_core::{presets, sweeps, switching, Error, GameChoice, SeedSpec};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::DivergedOrbit | Error::SingularChain => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_map(name: &str) -> PyResult<MapKind> {
    name.parse().map_err(to_py)
}

fn parse_games(seq: &str) -> PyResult<Vec<GameChoice>> {
    let pattern: parrondo_core::Pattern = seq.parse().map_err(to_py)?;
    Ok(pattern.games().to_vec())
}

fn games_to_string(seq: &[GameChoice]) -> String {
    seq.iter().map(|g| g.as_char()).collect()
}

/// Game A / Game B parameters.
#[pyclass(name = "GameParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyGameParams(parrondo_core::GameParams);

#[pymethods]
impl PyGameParams {
    #[new]
    #[pyo3(signature = (modulus = 3, epsilon = 0.005))]
    fn new(modulus: u32, epsilon: f64) -> PyResult<Self> {
        Ok(Self(parrondo_core::GameParams::canonical(modulus, epsilon).map_err(to_py)?))
    }

    #[getter]
    fn modulus(&self) -> u32 {
        self.0.modulus
    }
    #[getter]
    fn epsilon(&self) -> f64 {
        self.0.epsilon
    }
    #[getter]
    fn p(&self) -> f64 {
        self.0.p
    }
    #[getter]
    fn p1(&self) -> f64 {
        self.0.p1
    }
    #[getter]
    fn p2(&self) -> f64 {
        self.0.p2
    }

    fn __repr__(&self) -> String {
        format!("GameParams(modulus={}, epsilon={})", self.0.modulus, self.0.epsilon)
    }
}

fn params_or_default(params: Option<PyGameParams>) -> parrondo_core::GameParams {
    params.map_or_else(Default::default, |p| p.0)
}

/// A switching strategy.
#[pyclass(name = "Policy", frozen, from_py_object)]
#[derive(Clone)]
struct PyPolicy(parrondo_core::Policy);

#[pymethods]
impl PyPolicy {
    #[staticmethod]
    fn all_a() -> Self {
        Self(parrondo_core::Policy::AllA)
    }

    #[staticmethod]
    fn all_b() -> Self {
        Self(parrondo_core::Policy::AllB)
    }

    #[staticmethod]
    #[pyo3(signature = (gamma = 0.5))]
    fn random(gamma: f64) -> PyResult<Self> {
        Ok(Self(parrondo_core::Policy::random(gamma).map_err(to_py)?))
    }

    #[staticmethod]
    fn periodic(pattern: &str) -> PyResult<Self> {
        Ok(Self(parrondo_core::Policy::periodic(pattern).map_err(to_py)?))
    }

    #[staticmethod]
    #[pyo3(signature = (map, a, x0, gamma, b = 0.0, y0 = 0.0, normalize = true))]
    fn chaotic(map: &str, a: f64, x0: f64, gamma: f64, b: f64, y0: f64, normalize: bool) -> PyResult<Self> {
        let spec = MapSpec::new(parse_map(map)?, a, b).map_err(to_py)?;
        Ok(Self(parrondo_core::Policy::chaotic(spec, x0, y0, gamma, normalize).map_err(to_py)?))
    }

    /// A named chaotic configuration such as `"headline"` or `"fig9-lozi"`.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        presets::chaotic_preset(name)
            .map(|p| Self(p.policy()))
            .ok_or_else(|| PyValueError::new_err(format!("unknown preset `{name}`")))
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label()
    }

    #[getter]
    fn is_deterministic(&self) -> bool {
        self.0.is_deterministic()
    }

    fn __repr__(&self) -> String {
        format!("Policy({})", self.0.label())
    }
}

/// Monte Carlo ensemble summary.
#[pyclass(name = "EnsembleStats", frozen)]
struct PyEnsembleStats(parrondo_core::EnsembleStats);

#[pymethods]
impl PyEnsembleStats {
    #[getter]
    fn n_games(&self) -> usize {
        self.0.n_games
    }
    #[getter]
    fn trials(&self) -> usize {
        self.0.trials
    }
    #[getter]
    fn mean_capital(&self) -> Vec<f64> {
        self.0.mean_capital.clone()
    }
    #[getter]
    fn std_err(&self) -> Vec<f64> {
        self.0.std_err.clone()
    }
    #[getter]
    fn proportion_a(&self) -> f64 {
        self.0.proportion_a
    }
    #[getter]
    fn rate_estimate(&self) -> f64 {
        self.0.rate_estimate
    }
    #[getter]
    fn final_mean(&self) -> f64 {
        self.0.final_mean()
    }
    #[getter]
    fn final_std_err(&self) -> f64 {
        self.0.final_std_err()
    }

    fn __repr__(&self) -> String {
        format!(
            "EnsembleStats(final_mean={:.4}, final_std_err={:.4}, trials={})",
            self.0.final_mean(),
            self.0.final_std_err(),
            self.0.trials
        )
    }
}

#[pyfunction]
#[pyo3(signature = (map, a, x0, n, b = 0.0, y0 = 0.0, transient = 0, normalize = false))]
#[allow(clippy::too_many_arguments)]
fn generate_orbit(
    map: &str,
    a: f64,
    x0: f64,
    n: usize,
    b: f64,
    y0: f64,
    transient: usize,
    normalize: bool,
) -> PyResult<Vec<f64>> {
    let spec = MapSpec::new(parse_map(map)?, a, b).map_err(to_py)?;
    let orbit = chaos::generate_orbit(&spec, x0, y0, n, transient, chaos::DEFAULT_DIVERGENCE_BOUND);
    if orbit.diverged {
        return Err(to_py(Error::DivergedOrbit));
    }
    let orbit = if normalize { chaos::normalize_orbit(&orbit).map_err(to_py)? } else { orbit };
    Ok(orbit.values)
}

/// Games played by a deterministic policy, as a string over `A`/`B`.
#[pyfunction]
fn game_sequence(policy: &PyPolicy, n: usize) -> PyResult<String> {
    Ok(games_to_string(&switching::game_sequence(&policy.0, n).map_err(to_py)?))
}

/// `(period, pattern)` of a deterministic policy's sequence, or `None`.
#[pyfunction]
#[pyo3(signature = (policy, n = 300, transient = 50, max_period = 64))]
fn detect_period(policy: &PyPolicy, n: usize, transient: usize, max_period: usize) -> PyResult<Option<(usize, String)>> {
    let seq = switching::game_sequence(&policy.0, n).map_err(to_py)?;
    let found = switching::detect_period(&seq, max_period, transient).map_err(to_py)?;
    Ok(found.map(|p| (p.period, p.pattern.to_string())))
}

#[pyfunction]
#[pyo3(signature = (policy, n_games = 100, trials = 50_000, seed = 1, params = None))]
fn run_ensemble(
    py: Python<'_>,
    policy: &PyPolicy,
    n_games: usize,
    trials: usize,
    seed: u64,
    params: Option<PyGameParams>,
) -> PyResult<PyEnsembleStats> {
    let params = params_or_default(params);
    let policy = policy.0.clone();
    let stats = py
        .detach(|| parrondo_core::run_ensemble(&params, &policy, n_games, trials, &SeedSpec::new(seed)))
        .map_err(to_py)?;
    Ok(PyEnsembleStats(stats))
}

/// Long-run rate and residue distribution for AllA, AllB, random or periodic play.
#[pyfunction]
#[pyo3(signature = (policy, params = None, burn_in = 200))]
fn exact_rate(policy: &PyPolicy, params: Option<PyGameParams>, burn_in: usize) -> PyResult<(f64, Vec<f64>)> {
    let params = params_or_default(params);
    let mix = match &policy.0 {
        parrondo_core::Policy::AllA => Mixture::Game(GameChoice::A),
        parrondo_core::Policy::AllB => Mixture::Game(GameChoice::B),
        parrondo_core::Policy::Random { gamma } => Mixture::Random { gamma: *gamma },
        parrondo_core::Policy::Periodic(p) => {
            let r = oracle::periodic_rate(&params, p, burn_in).map_err(to_py)?;
            return Ok((r.rate, r.stationary.probs));
        }
        parrondo_core::Policy::Chaotic(_) => {
            return Err(PyValueError::new_err("exact_rate needs an allA, allB, random or periodic policy"))
        }
    };
    let r = oracle::exact_rate(&oracle::step_model(&params, mix).map_err(to_py)?).map_err(to_py)?;
    Ok((r.rate, r.stationary.probs))
}

/// Exact expected capital after each of `n` rounds, starting from 0.
#[pyfunction]
#[pyo3(signature = (policy, n = 100, params = None))]
fn exact_trajectory(policy: &PyPolicy, n: usize, params: Option<PyGameParams>) -> PyResult<Vec<f64>> {
    oracle::policy_expected_trajectory(&params_or_default(params), &policy.0, n).map_err(to_py)
}

/// Expected final capital of a game string by enumerating every outcome path.
#[pyfunction]
#[pyo3(signature = (games, params = None))]
fn brute_force_expected(games: &str, params: Option<PyGameParams>) -> PyResult<f64> {
    oracle::brute_force_expected(&params_or_default(params), &parse_games(games)?).map_err(to_py)
}

type GridRows = Vec<(f64, f64, Option<f64>)>;

#[pyfunction]
#[pyo3(signature = (map, a, gammas, x0s, b = 0.0, y0 = 0.0, normalize = true, n_games = 100, trials = 5000, seed = 1, params = None))]
#[allow(clippy::too_many_arguments)]
fn sweep_gamma_x0(
    py: Python<'_>,
    map: &str,
    a: f64,
    gammas: Vec<f64>,
    x0s: Vec<f64>,
    b: f64,
    y0: f64,
    normalize: bool,
    n_games: usize,
    trials: usize,
    seed: u64,
    params: Option<PyGameParams>,
) -> PyResult<GridRows> {
    let params = params_or_default(params);
    let spec = MapSpec::new(parse_map(map)?, a, b).map_err(to_py)?;
    let g = Axis::from_values("gamma", gammas).map_err(to_py)?;
    let x = Axis::from_values("x0", x0s).map_err(to_py)?;
    let grid = py
        .detach(|| sweeps::sweep_gamma_x0(&params, spec, y0, normalize, &g, &x, n_games, trials, SeedSpec::new(seed)))
        .map_err(to_py)?;
    Ok(grid.rows().collect())
}

#[pyfunction]
#[pyo3(signature = (map, a_values, b_values, gamma = 0.5, x0 = 0.0, y0 = 0.0, normalize = true, n_games = 100, trials = 5000, seed = 1, params = None))]
#[allow(clippy::too_many_arguments)]
fn sweep_ab(
    py: Python<'_>,
    map: &str,
    a_values: Vec<f64>,
    b_values: Vec<f64>,
    gamma: f64,
    x0: f64,
    y0: f64,
    normalize: bool,
    n_games: usize,
    trials: usize,
    seed: u64,
    params: Option<PyGameParams>,
) -> PyResult<GridRows> {
    let params = params_or_default(params);
    let kind = parse_map(map)?;
    let a = Axis::from_values("a", a_values).map_err(to_py)?;
    let b = Axis::from_values("b", b_values).map_err(to_py)?;
    let grid = py
        .detach(|| {
            sweeps::sweep_ab(&params, kind, &a, &b, gamma, x0, y0, normalize, n_games, trials, SeedSpec::new(seed))
        })
        .map_err(to_py)?;
    Ok(grid.rows().collect())
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    presets::preset_names()
}

#[pymodule]
fn parrondo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGameParams>()?;
    m.add_class::<PyPolicy>()?;
    m.add_class::<PyEnsembleStats>()?;
    m.add_function(wrap_pyfunction!(generate_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(game_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(detect_period, m)?)?;
    m.add_function(wrap_pyfunction!(run_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(exact_rate, m)?)?;
    m.add_function(wrap_pyfunction!(exact_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_expected, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_gamma_x0, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_ab, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    Ok(())
}
