//! Adaptive choice of the Fock cutoff.

use crate::error::{Error, Result};
use crate::fock::HilbertSpec;

/// Starting cutoff `max(20, ⌈4(√G|α| + √(G−1) + m + 2)²⌉)` for a pipeline
/// with PILA gain `G`, input amplitude `|α|` and `m` added/removed photons.
pub fn initial_dim(gain: f64, mod_alpha: f64, extra_photons: u32) -> usize {
    let spread = gain.max(1.0).sqrt() * mod_alpha.abs() + (gain - 1.0).max(0.0).sqrt() + extra_photons as f64 + 2.0;
    ((4.0 * spread * spread).ceil() as usize).max(20)
}

/// How truncation is chosen and checked for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub trunc_tol: f64,
    pub num_tol: f64,
    /// Multiplies the heuristic starting dimension (2 for convergence checks).
    pub dim_multiplier: usize,
    /// Replaces the heuristic starting dimension when set.
    pub dim_override: Option<usize>,
    /// Doubling stops with an error past this size.
    pub max_dim: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            trunc_tol: HilbertSpec::DEFAULT_TRUNC_TOL,
            num_tol: HilbertSpec::DEFAULT_NUM_TOL,
            dim_multiplier: 1,
            dim_override: None,
            max_dim: 4096,
        }
    }
}

impl TruncationPolicy {
    /// The same policy with every starting dimension doubled.
    pub fn doubled(&self) -> Self {
        Self {
            dim_multiplier: self.dim_multiplier * 2,
            dim_override: self.dim_override.map(|d| d * 2),
            ..*self
        }
    }

    pub fn spec(&self, dim: usize) -> Result<HilbertSpec> {
        HilbertSpec::with_tolerances(dim, self.trunc_tol, self.num_tol)
    }

    /// Runs `build` at the starting cutoff, doubling it for as long as the
    /// result reports [`Error::Truncation`].
    pub fn run<T>(
        &self,
        heuristic_dim: usize,
        mut build: impl FnMut(HilbertSpec) -> Result<T>,
    ) -> Result<(T, HilbertSpec)> {
        let start = self.dim_override.unwrap_or(heuristic_dim * self.dim_multiplier.max(1));
        let mut spec = self.spec(start.max(2))?;
        loop {
            match build(spec) {
                Ok(v) => return Ok((v, spec)),
                Err(Error::Truncation { .. }) if spec.dim() * 2 <= self.max_dim => spec = spec.doubled(),
                Err(e) => return Err(e),
            }
        }
    }
}
