//! Truncated Fock-basis state and operator algebra.

mod density;
mod ket;
mod operator;
mod spec;
pub mod special;
mod two_mode;

pub use density::DensityOperator;
pub use ket::Ket;
pub use operator::FockOperator;
pub use spec::HilbertSpec;
pub use two_mode::{Mode, Tensor, TwoModeDensity, TwoModeKet, TwoModeOperator};

pub(crate) use nalgebra::{DMatrix, DVector};
pub(crate) use num_complex::Complex64 as C64;
