use crate::error::{invalid, Result};

/// Configuration of a truncated Fock space `|0⟩ … |dim−1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertSpec {
    dim: usize,
    trunc_tol: f64,
    num_tol: f64,
}

impl HilbertSpec {
    /// Maximum probability mass allowed beyond the truncation.
    pub const DEFAULT_TRUNC_TOL: f64 = 1e-10;
    /// Floating-point comparison tolerance.
    pub const DEFAULT_NUM_TOL: f64 = 1e-9;

    pub fn new(dim: usize) -> Result<Self> {
        Self::with_tolerances(dim, Self::DEFAULT_TRUNC_TOL, Self::DEFAULT_NUM_TOL)
    }

    pub fn with_tolerances(dim: usize, trunc_tol: f64, num_tol: f64) -> Result<Self> {
        if dim < 2 {
            return Err(invalid(format!("dim must be at least 2, got {dim}")));
        }
        for (name, v) in [("trunc_tol", trunc_tol), ("num_tol", num_tol)] {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(format!("{name} must be finite and nonnegative, got {v}")));
            }
        }
        Ok(Self {
            dim,
            trunc_tol,
            num_tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc_tol(&self) -> f64 {
        self.trunc_tol
    }

    pub fn num_tol(&self) -> f64 {
        self.num_tol
    }

    /// Same tolerances, different dimension.
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::with_tolerances(dim, self.trunc_tol, self.num_tol)
    }

    pub fn doubled(&self) -> Self {
        Self {
            dim: self.dim * 2,
            ..*self
        }
    }
}
