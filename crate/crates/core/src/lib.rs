//! Force-noise analysis for an optomechanical sensor cascaded with an
//! all-optical negative-mass oscillator.
//!
//! * [`linsys`]: generic transfer matrices, loss, cascading and spectra.
//! * [`models`]: the two subsystems and their susceptibilities.
//! * [`spectra`]: closed-form noise densities and quantum limits.
//! * [`scenario`]: configuration, sweeps, presets and output.

pub mod error;
pub mod grid;
pub mod linsys;
pub mod models;
pub mod optimize;
pub mod scenario;
pub mod spectra;

pub use error::{Error, Result};
pub use grid::{Grid, Spacing};
pub use models::{MismatchParams, NmoParams, OmsParams};
pub use scenario::{parse_config, preset, run_sweep, Scenario, SweepResult};
pub use spectra::{LossBudget, Normalization};
