//! Noise-budget analysis for n-stage cascade networks.
//!
//! Computes stage-wise and total noise factors with Friis' classical
//! formulas and with the corrected formulas that track the noise actually
//! arriving at each stage's input, cross-checks every closed form against
//! direct signal/noise propagation, and relates the cascade picture to
//! staircase avalanche photodiode excess noise.
//!
//! All computations are generic over [`Scalar`] (`f32`, `f64`); the aliases
//! below fix the common `f64` case.
//!
//! ```
//! use cascade_noise::{engine, Network, Stage};
//!
//! let net = Network::new(100.0, 1.0, vec![Stage::new(10.0, 0.0, 10.0); 2]).unwrap();
//! let report = engine::build_report(&net).unwrap();
//! assert!((report.per_stage[1].corrected.value() - 1.05).abs() < 1e-12);
//! assert!((report.totals.product_composition.value() - 2.1).abs() < 1e-12);
//! ```

pub mod apd;
pub mod engine;
mod error;
pub mod monte_carlo;
pub mod network;
mod scalar;
pub mod scenario;
pub mod units;

pub use error::{Error, Result};
pub use network::{validate, CascadeNetwork, NoiseFactor, PowerLevel, StageSpec, Violation};
pub use scalar::{rel_close, rel_diff, Scalar};
pub use units::{db_to_linear, linear_to_db};

pub type Power = PowerLevel<f64>;
pub type Stage = StageSpec<f64>;
pub type Network = CascadeNetwork<f64>;
pub type Factor = NoiseFactor<f64>;
pub type Report = engine::NoiseReport<f64>;
pub type Trace = engine::PropagationTrace<f64>;
pub type Apd = apd::StaircaseApd<f64>;
pub type Steps = apd::StepStats<f64>;
pub type Config = scenario::ScenarioConfig<f64>;
pub type Series = scenario::SeriesTable<f64>;

pub type Stage32 = StageSpec<f32>;
pub type Network32 = CascadeNetwork<f32>;
pub type Report32 = engine::NoiseReport<f32>;
