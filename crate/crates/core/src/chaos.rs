//! The six chaotic generators used to drive switching, plus orbit tooling
//! (generation, min-max normalization, bifurcation scans, histograms and
//! phase pairs).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Magnitude beyond which an orbit is considered to have escaped.
pub const DEFAULT_DIVERGENCE_BOUND: f64 = 1e6;

/// Transient discarded by bifurcation scans before sampling.
pub const DEFAULT_SCAN_TRANSIENT: usize = 500;

/// Span below which an orbit counts as constant during normalization.
const DEGENERATE_SPAN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    Logistic,
    Tent,
    Sinusoidal,
    Gaussian,
    Henon,
    Lozi,
}

impl MapKind {
    pub const ALL: [MapKind; 6] = [
        MapKind::Logistic,
        MapKind::Tent,
        MapKind::Sinusoidal,
        MapKind::Gaussian,
        MapKind::Henon,
        MapKind::Lozi,
    ];

    pub fn is_two_dimensional(self) -> bool {
        matches!(self, MapKind::Henon | MapKind::Lozi)
    }

    pub fn name(self) -> &'static str {
        match self {
            MapKind::Logistic => "logistic",
            MapKind::Tent => "tent",
            MapKind::Sinusoidal => "sinusoidal",
            MapKind::Gaussian => "gaussian",
            MapKind::Henon => "henon",
            MapKind::Lozi => "lozi",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        MapKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| Error::UnknownMap(s.to_string()))
    }
}

/// A chaotic generator and its coefficients. `b` only matters for the
/// two-dimensional maps and is stored as 0 otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapSpec {
    pub kind: MapKind,
    pub a: f64,
    pub b: f64,
}

impl MapSpec {
    pub fn new(kind: MapKind, a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "map coefficients must be finite (a={a}, b={b})"
            )));
        }
        let b = if kind.is_two_dimensional() { b } else { 0.0 };
        Ok(MapSpec { kind, a, b })
    }

    pub fn one_dimensional(kind: MapKind, a: f64) -> Result<Self> {
        Self::new(kind, a, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MapState {
    pub x: f64,
    pub y: f64,
}

impl MapState {
    pub fn new(x: f64, y: f64) -> Self {
        MapState { x, y }
    }

    fn within(&self, bound: f64) -> bool {
        // NaN fails both comparisons and so counts as escaped.
        self.x.abs() <= bound && self.y.abs() <= bound
    }
}

/// Advance the map by one iteration.
pub fn map_step(spec: &MapSpec, state: MapState) -> MapState {
    let MapState { x, y } = state;
    let a = spec.a;
    match spec.kind {
        MapKind::Logistic => MapState::new(a * x * (1.0 - x), 0.0),
        MapKind::Tent => {
            let next = if x <= 0.5 { a * x } else { a * (1.0 - x) };
            MapState::new(next, 0.0)
        }
        MapKind::Sinusoidal => MapState::new(a * x * x * (PI * x).sin(), 0.0),
        MapKind::Gaussian => {
            if x == 0.0 {
                MapState::new(0.0, 0.0)
            } else {
                let inv = 1.0 / x;
                MapState::new(inv - inv.floor(), 0.0)
            }
        }
        MapKind::Henon => MapState::new(y + 1.0 - a * x * x, spec.b * x),
        MapKind::Lozi => MapState::new(y + 1.0 - a * x.abs(), spec.b * x),
    }
}

/// A realized sequence of x-components.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub values: Vec<f64>,
    pub diverged: bool,
    pub raw_min: f64,
    pub raw_max: f64,
}

impl Orbit {
    pub fn from_values(values: Vec<f64>, diverged: bool) -> Self {
        let (raw_min, raw_max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        Orbit {
            values,
            diverged,
            raw_min,
            raw_max,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Iterate `transient + n` times from `(x0, y0)` and keep the x-component of
/// the last `n` states. Stops early (with `diverged` set) as soon as either
/// coordinate leaves `[-divergence_bound, divergence_bound]`.
pub fn generate_orbit(
    spec: &MapSpec,
    x0: f64,
    y0: f64,
    n: usize,
    transient: usize,
    divergence_bound: f64,
) -> Orbit {
    let mut state = MapState::new(x0, y0);
    let mut values = Vec::with_capacity(n);
    let mut diverged = false;
    for i in 0..transient + n {
        state = map_step(spec, state);
        if !state.within(divergence_bound) {
            diverged = true;
            break;
        }
        if i >= transient {
            values.push(state.x);
        }
    }
    Orbit::from_values(values, diverged)
}

/// The `n` values a switching policy compares against its threshold: the
/// initial condition followed by its first `n - 1` iterates.
pub fn switching_orbit(spec: &MapSpec, x0: f64, y0: f64, n: usize, divergence_bound: f64) -> Orbit {
    let seed = MapState::new(x0, y0);
    if n == 0 {
        return Orbit::from_values(Vec::new(), false);
    }
    if !seed.within(divergence_bound) {
        return Orbit::from_values(Vec::new(), true);
    }
    let tail = generate_orbit(spec, x0, y0, n - 1, 0, divergence_bound);
    let mut values = Vec::with_capacity(n);
    values.push(x0);
    values.extend_from_slice(&tail.values);
    Orbit::from_values(values, tail.diverged)
}

/// Affine min-max rescale into `[0, 1]`. A constant orbit maps to 0.5
/// everywhere so that the threshold alone decides the single game played.
pub fn normalize_orbit(orbit: &Orbit) -> Result<Orbit> {
    if orbit.diverged {
        return Err(Error::DivergedOrbit);
    }
    let span = orbit.raw_max - orbit.raw_min;
    let values = if span.is_nan() || span < DEGENERATE_SPAN {
        vec![0.5; orbit.len()]
    } else {
        orbit
            .values
            .iter()
            .map(|v| ((v - orbit.raw_min) / span).clamp(0.0, 1.0))
            .collect()
    };
    Ok(Orbit::from_values(values, false))
}

/// An inclusive grid of parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// `lo, lo+step, …` up to and including `hi` (with a small tolerance so
    /// that decimal steps land on the endpoint).
    pub fn range(name: &str, lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 || lo > hi {
            return Err(Error::InvalidParameter(format!(
                "axis {name}: need finite lo <= hi and step > 0 (lo={lo}, hi={hi}, step={step})"
            )));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        let values = (0..count).map(|i| lo + i as f64 * step).collect();
        Ok(Axis {
            name: name.to_string(),
            values,
        })
    }

    pub fn from_values(name: &str, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "axis {name}: values must be a nonempty list of finite numbers"
            )));
        }
        Ok(Axis {
            name: name.to_string(),
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Long-run orbit samples for every coefficient on `a_axis`. Returns
/// `(a, x)` rows; a diverging coefficient contributes only the samples
/// gathered before it escaped.
pub fn bifurcation_scan(
    kind: MapKind,
    a_axis: &Axis,
    x0: f64,
    samples: usize,
    transient: usize,
) -> Result<Vec<(f64, f64)>> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(a_axis.len() * samples);
    for &a in &a_axis.values {
        let spec = MapSpec::new(kind, a, 0.0)?;
        let orbit = generate_orbit(&spec, x0, 0.0, samples, transient, DEFAULT_DIVERGENCE_BOUND);
        rows.extend(orbit.values.iter().map(|&x| (a, x)));
    }
    Ok(rows)
}

/// Counts over `bins` equal-width bins of `[0, 1]`. Values on an interior
/// edge go to the upper bin; 1.0 and anything outside the unit interval are
/// clamped into the end bins so that counts always sum to the orbit length.
pub fn histogram(values: &[f64], bins: usize) -> Result<Vec<u64>> {
    if bins < 2 {
        return Err(Error::InvalidParameter("histogram needs at least 2 bins".into()));
    }
    let mut counts = vec![0u64; bins];
    for &v in values {
        let idx = if v.is_nan() || v <= 0.0 {
            0
        } else {
            ((v * bins as f64).floor() as usize).min(bins - 1)
        };
        counts[idx] += 1;
    }
    Ok(counts)
}

/// Consecutive `(x_n, x_{n+1})` pairs.
pub fn phase_pairs(values: &[f64]) -> Vec<(f64, f64)> {
    values.windows(2).map(|w| (w[0], w[1])).collect()
}
