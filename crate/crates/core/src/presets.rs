//! Experiment settings used for the published figures.

use crate::chaos::{MapKind, MapSpec};
use crate::switching::Policy;

/// One chaotic switching configuration tuned so that roughly half the
/// rounds play Game A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaoticPreset {
    pub name: &'static str,
    pub kind: MapKind,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub x0: f64,
    pub y0: f64,
}

impl ChaoticPreset {
    pub fn map(&self) -> MapSpec {
        MapSpec::new(self.kind, self.a, self.b).expect("preset coefficients are finite")
    }

    pub fn policy(&self) -> Policy {
        Policy::chaotic(self.map(), self.x0, self.y0, self.gamma, true).expect("preset is valid")
    }
}

/// The fair-comparison block: every chaotic switching at its
/// proportion-0.5 threshold.
pub const FAIR_COMPARISON: [ChaoticPreset; 6] = [
    ChaoticPreset { name: "fig9-logistic", kind: MapKind::Logistic, a: 4.0, b: 0.0, gamma: 0.50, x0: 0.1, y0: 0.0 },
    ChaoticPreset { name: "fig9-sinusoidal", kind: MapKind::Sinusoidal, a: 2.27, b: 0.0, gamma: 0.55, x0: 0.5, y0: 0.0 },
    ChaoticPreset { name: "fig9-tent", kind: MapKind::Tent, a: 1.9, b: 0.0, gamma: 0.55, x0: 0.8, y0: 0.0 },
    ChaoticPreset { name: "fig9-gaussian", kind: MapKind::Gaussian, a: 0.0, b: 0.0, gamma: 0.41, x0: 0.701, y0: 0.0 },
    ChaoticPreset { name: "fig9-henon", kind: MapKind::Henon, a: 1.7, b: 0.0, gamma: 0.68, x0: 0.0, y0: 0.0 },
    ChaoticPreset { name: "fig9-lozi", kind: MapKind::Lozi, a: 1.7, b: 0.0, gamma: 0.55, x0: 0.0, y0: 0.0 },
];

/// Logistic switching in its period-5 window; the best gain reported.
pub const HEADLINE: ChaoticPreset = ChaoticPreset {
    name: "headline",
    kind: MapKind::Logistic,
    a: 3.74,
    b: 0.0,
    gamma: 0.5,
    x0: 0.1,
    y0: 0.0,
};

pub fn chaotic_preset(name: &str) -> Option<ChaoticPreset> {
    FAIR_COMPARISON
        .iter()
        .chain(std::iter::once(&HEADLINE))
        .find(|p| p.name == name)
        .copied()
}

pub fn preset_names() -> Vec<&'static str> {
    FAIR_COMPARISON.iter().map(|p| p.name).chain(std::iter::once(HEADLINE.name)).collect()
}

pub const GAMES: usize = 100;
pub const GRID_TRIALS: usize = 5_000;
pub const COMPARE_TRIALS: usize = 50_000;
pub const COARSE_TRIALS: usize = 1_000;
pub const BIFURCATION_SAMPLES: usize = 250;

/// Default coefficient range and initial condition for bifurcation scans.
pub fn bifurcation_defaults(kind: MapKind) -> (f64, f64, f64) {
    match kind {
        MapKind::Sinusoidal => (2.0, 2.4, 0.5),
        MapKind::Tent => (0.0, 2.0, 0.1),
        _ => (0.0, 4.0, 0.1),
    }
}

/// Coefficients and x0 step for the gamma × x0 gain grids.
pub fn gamma_x0_defaults(kind: MapKind) -> (f64, f64, f64) {
    match kind {
        MapKind::Logistic => (4.0, 0.0, 0.01),
        MapKind::Sinusoidal => (2.27, 0.0, 0.1),
        MapKind::Tent => (1.9, 0.0, 0.1),
        MapKind::Gaussian => (0.0, 0.0, 0.1),
        MapKind::Henon | MapKind::Lozi => (1.7, 0.0, 0.1),
    }
}

/// Coefficient grid for the a × b sweeps (both axes).
pub const AB_RANGE: (f64, f64, f64) = (0.0, 4.0, 0.1);
pub const AB_GAMMA: f64 = 0.5;
pub const GAMMA_RANGE: (f64, f64, f64) = (0.0, 1.0, 0.1);
