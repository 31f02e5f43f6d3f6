use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::fock::special::displacement_matrix;
use crate::fock::DensityOperator;

/// Grid values below this count as negative.
pub const NEGATIVITY_THRESHOLD: f64 = -1e-9;

/// Tail mass below which Fock levels are dropped from the Wigner sum; off-diagonal
/// terms scale with its square root.
const TAIL_CUTOFF: f64 = 1e-30;

/// Rectangular phase-space grid `β = x + i p`, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub step: f64,
}

impl Default for WignerGrid {
    fn default() -> Self {
        Self {
            x_min: -3.0,
            x_max: 3.0,
            p_min: -3.0,
            p_max: 3.0,
            step: 0.05,
        }
    }
}

impl WignerGrid {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.p_min, self.p_max, self.step]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.step <= 0.0 || self.x_min > self.x_max || self.p_min > self.p_max {
            return Err(invalid(format!("invalid Wigner grid {self:?}")));
        }
        Ok(())
    }

    fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| lo + i as f64 * step).collect()
    }

    pub fn xs(&self) -> Vec<f64> {
        Self::axis(self.x_min, self.x_max, self.step)
    }

    pub fn ps(&self) -> Vec<f64> {
        Self::axis(self.p_min, self.p_max, self.step)
    }

    /// Points in x-major order.
    pub fn points(&self) -> Vec<C64> {
        let ps = self.ps();
        self.xs()
            .into_iter()
            .flat_map(|x| ps.iter().map(move |&p| C64::new(x, p)))
            .collect()
    }
}

/// `W(β) = (2/π) Tr[ρ D(β) Π D†(β)] = (2/π) Σ_{m,n} ρ_{nm} ⟨m|D(2β)|n⟩ (−1)^n`.
pub fn wigner(rho: &DensityOperator, points: &[C64]) -> Result<Vec<f64>> {
    rho.require_normalized("wigner")?;
    let m = rho.matrix();
    let mut dim = m.nrows();
    let mut tail = 0.0;
    while dim > 2 && tail + m[(dim - 1, dim - 1)].re < TAIL_CUTOFF {
        tail += m[(dim - 1, dim - 1)].re;
        dim -= 1;
    }
    let rho = m.view((0, 0), (dim, dim)).into_owned();
    Ok(points
        .par_iter()
        .map(|&beta| {
            let d = displacement_matrix(beta * 2.0, dim);
            let mut acc = 0.0;
            for n in 0..dim {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let col: f64 = (0..dim).map(|k| (rho[(n, k)] * d[(k, n)]).re).sum();
                acc += sign * col;
            }
            acc * std::f64::consts::FRAC_2_PI
        })
        .collect())
}

/// Smallest value on the grid and whether it is below [`NEGATIVITY_THRESHOLD`].
pub fn wigner_negativity(values: &[f64]) -> (f64, bool) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    (min, min < NEGATIVITY_THRESHOLD)
}
