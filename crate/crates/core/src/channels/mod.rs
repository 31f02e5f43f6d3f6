//! The quantum-limited PILA channel, ideal probabilistic operations and their
//! detector-based realizations.

mod heralded;
mod photonic;
mod pila;

pub use heralded::{bs_subtraction, ndpa_addition, Detector, Heralded};
pub use photonic::{apply_operation, build_operator, PhotonicOp};
pub use pila::{pila_channel, pila_coherent};
