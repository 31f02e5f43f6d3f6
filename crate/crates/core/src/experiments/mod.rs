//! Gain calibration, parameter sweeps and the datasets behind each figure.

mod calibrate;
pub mod figures;
mod sweep;
mod table;

pub use calibrate::{calibrate_gain, Calibration, MAX_BISECTIONS};
pub use sweep::{linspace, run_sweep, Output, SweepPlan, SweepVar};
pub use table::{Row, Table};
