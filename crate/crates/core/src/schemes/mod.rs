//! Amplifier pipelines behind a common trait, selectable by name.

mod builtin;
mod registry;

pub use builtin::{Pila, PilaThenBsSubtraction, PilaThenNdpaAddition, PilaThenOp, Scissor};
pub use registry::{SchemeFactory, SchemeParams, SchemeRegistry};

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::fock::{DensityOperator, HilbertSpec};

/// Output of one amplifier run on a coherent input.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplified {
    /// Normalized output state.
    pub state: DensityOperator,
    /// Probability of the heralding event for detector-based schemes.
    pub success_probability: Option<f64>,
    /// `Tr(Ô ρ Ô†)` for ideal operations.
    pub heralding_weight: Option<f64>,
    /// Probability lost to the cutoff before normalization.
    pub deficit: f64,
}

/// An amplifier acting on coherent inputs `|α⟩`.
pub trait AmplifierScheme: Send + Sync + fmt::Debug {
    /// Short label used in tables, e.g. `sub1` or `scissor3`.
    fn name(&self) -> String;

    /// Starting cutoff for an input of modulus `mod_alpha`.
    fn start_dim(&self, mod_alpha: f64) -> usize;

    fn amplify(&self, alpha: C64, spec: HilbertSpec) -> Result<Amplified>;

    /// Whether runs carry a physical success probability.
    fn is_physical(&self) -> bool;

    /// PILA intensity gain, if the scheme has an amplifier stage.
    fn pila_gain(&self) -> Option<f64>;

    /// Name of the parameter adjusted by calibration (`G` or `g`).
    fn tuning_parameter(&self) -> &'static str;

    fn tuning(&self) -> f64;

    /// The same scheme with its tuning parameter set to `value`.
    fn retuned(&self, value: f64) -> Result<Box<dyn AmplifierScheme>>;
}
