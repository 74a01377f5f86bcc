//! Parrondo's games under random, periodic and chaotic switching.
//!
//! * [`chaos`]: the six chaotic generators and orbit tooling.
//! * [`games`]: Game A / Game B coins and capital updates.
//! * [`switching`]: policies deciding which game is played each round.
//! * [`engine`]: seeded, thread-count-independent Monte Carlo ensembles.
//! * [`oracle`]: exact rates and expected capital via the residue chain.
//! * [`sweeps`]: grid experiments over thresholds, seeds and coefficients.

pub mod chaos;
pub mod engine;
mod error;
pub mod games;
pub mod oracle;
pub mod presets;
pub mod sweeps;
pub mod switching;

pub use chaos::{Axis, MapKind, MapSpec, MapState, Orbit};
pub use engine::{run_ensemble, EnsembleStats, SeedSpec};
pub use error::{Error, Result};
pub use games::{GameChoice, GameParams};
pub use sweeps::GridResult;
pub use switching::{Pattern, Policy, PolicyState};
