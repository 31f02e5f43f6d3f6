//! Fock-space simulation of a quantum-noise-limited phase-insensitive linear
//! amplifier (PILA) followed by heralded photonic operations.
//!
//! The crate is layered bottom-up:
//!
//! - [`fock`]: truncated single- and two-mode Fock-space states and operators.
//! - [`channels`]: the PILA channel, ideal operations `â^m`, `â†^m`,
//!   `t·â + r·â†`, and their detector-based realizations.
//! - [`scissor`]: the N-scissor noiseless amplifier and its circuit-level oracle.
//! - [`metrics`]: effective gain, fidelity, Holevo phase variance, Wigner
//!   function and phase averaging.
//! - [`schemes`]: every amplifier pipeline behind the [`AmplifierScheme`] trait,
//!   selectable by name through a [`SchemeRegistry`].
//! - [`experiments`]: gain calibration, sweeps and figure datasets.
//!
//! ```
//! use noisy_amp::{metrics, schemes::SchemeParams, SchemeRegistry, TruncationPolicy};
//! use num_complex::Complex64;
//!
//! let registry = SchemeRegistry::with_builtins();
//! let params = SchemeParams { gain: 1.2, m: 1, ..SchemeParams::default() };
//! let scheme = registry.build("sub", &params).unwrap();
//! let eval = metrics::evaluate(scheme.as_ref(), Complex64::new(0.2, 0.0), &TruncationPolicy::default()).unwrap();
//! assert!((eval.report.effective_gain - 3.9159).abs() < 1e-3);
//! ```

pub mod channels;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod metrics;
pub mod schemes;
pub mod scissor;
pub mod truncation;

pub use error::{Error, Result};
pub use fock::{DensityOperator, FockOperator, HilbertSpec, Ket};
pub use schemes::{AmplifierScheme, SchemeRegistry};
pub use truncation::TruncationPolicy;

pub use num_complex::Complex64;
