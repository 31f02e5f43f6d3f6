use super::density::hermitize;
use super::special::{beam_splitter_amplitude, ln_factorials, squeezer_amplitude};
use super::{DMatrix, DVector, DensityOperator, FockOperator, HilbertSpec, Ket, C64};
use crate::error::{invalid, Error, Result};

/// Which factor of a two-mode space. Storage is row-major in the mode
/// order: index `(i, k) ↦ i·dim₁ + k`, mode 0 the slow index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    Second,
}

/// `A ⊗ B`.
pub trait Tensor<Rhs = Self> {
    type Output;

    fn tensor(&self, rhs: &Rhs) -> Self::Output;
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeKet {
    amplitudes: DVector<C64>,
    specs: [HilbertSpec; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeDensity {
    matrix: DMatrix<C64>,
    specs: [HilbertSpec; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeOperator {
    matrix: DMatrix<C64>,
    specs: [HilbertSpec; 2],
}

impl Tensor for Ket {
    type Output = TwoModeKet;

    fn tensor(&self, rhs: &Ket) -> TwoModeKet {
        TwoModeKet {
            amplitudes: self.amplitudes().kronecker(rhs.amplitudes()),
            specs: [self.spec(), rhs.spec()],
        }
    }
}

impl Tensor for DensityOperator {
    type Output = TwoModeDensity;

    fn tensor(&self, rhs: &DensityOperator) -> TwoModeDensity {
        TwoModeDensity {
            matrix: self.matrix().kronecker(rhs.matrix()),
            specs: [self.spec(), rhs.spec()],
        }
    }
}

impl Tensor for FockOperator {
    type Output = TwoModeOperator;

    fn tensor(&self, rhs: &FockOperator) -> TwoModeOperator {
        TwoModeOperator {
            matrix: self.matrix().kronecker(rhs.matrix()),
            specs: [self.spec(), rhs.spec()],
        }
    }
}

fn total_dim(specs: &[HilbertSpec; 2]) -> usize {
    specs[0].dim() * specs[1].dim()
}

impl TwoModeKet {
    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn specs(&self) -> [HilbertSpec; 2] {
        self.specs
    }

    pub fn projector(&self) -> TwoModeDensity {
        TwoModeDensity {
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
            specs: self.specs,
        }
    }
}

impl TwoModeDensity {
    pub fn new(matrix: DMatrix<C64>, specs: [HilbertSpec; 2]) -> Result<Self> {
        let d = total_dim(&specs);
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { matrix, specs })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn specs(&self) -> [HilbertSpec; 2] {
        self.specs
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Traces out the other mode.
    pub fn partial_trace(&self, keep: Mode) -> DensityOperator {
        let (d0, d1) = (self.specs[0].dim(), self.specs[1].dim());
        let m = &self.matrix;
        match keep {
            Mode::First => {
                let mut out = DMatrix::zeros(d0, d0);
                for i in 0..d0 {
                    for j in 0..d0 {
                        out[(i, j)] = (0..d1).map(|k| m[(i * d1 + k, j * d1 + k)]).sum();
                    }
                }
                DensityOperator::from_parts(out, self.specs[0])
            }
            Mode::Second => {
                let mut out = DMatrix::zeros(d1, d1);
                for i in 0..d1 {
                    for j in 0..d1 {
                        out[(i, j)] = (0..d0).map(|k| m[(k * d1 + i, k * d1 + j)]).sum();
                    }
                }
                DensityOperator::from_parts(out, self.specs[1])
            }
        }
    }

    /// Unnormalized state of the other mode after finding `mode` in `|n⟩`.
    pub fn project(&self, mode: Mode, n: usize) -> Result<DensityOperator> {
        let (d0, d1) = (self.specs[0].dim(), self.specs[1].dim());
        let m = &self.matrix;
        match mode {
            Mode::Second => {
                if n >= d1 {
                    return Err(invalid(format!("projection onto |{n}⟩ outside dim {d1}")));
                }
                let out = DMatrix::from_fn(d0, d0, |i, j| m[(i * d1 + n, j * d1 + n)]);
                Ok(DensityOperator::from_parts(out, self.specs[0]))
            }
            Mode::First => {
                if n >= d0 {
                    return Err(invalid(format!("projection onto |{n}⟩ outside dim {d0}")));
                }
                let out = DMatrix::from_fn(d1, d1, |i, j| m[(n * d1 + i, n * d1 + j)]);
                Ok(DensityOperator::from_parts(out, self.specs[1]))
            }
        }
    }
}

impl TwoModeOperator {
    pub fn new(matrix: DMatrix<C64>, specs: [HilbertSpec; 2]) -> Result<Self> {
        let d = total_dim(&specs);
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { matrix, specs })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn specs(&self) -> [HilbertSpec; 2] {
        self.specs
    }

    /// Beam splitter with transmittance `T` (`t = √T`, `r = √(1−T)`), built
    /// from closed-form elements. Exactly unitary on the blocks of total photon
    /// number below `min(dim₀, dim₁)`.
    pub fn beam_splitter(transmittance: f64, specs: [HilbertSpec; 2]) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmittance) {
            return Err(invalid(format!(
                "transmittance must lie in [0, 1], got {transmittance}"
            )));
        }
        let (t, r) = (transmittance.sqrt(), (1.0 - transmittance).sqrt());
        let (d0, d1) = (specs[0].dim(), specs[1].dim());
        let mut matrix = DMatrix::zeros(d0 * d1, d0 * d1);
        for n1 in 0..d0 {
            for n2 in 0..d1 {
                for m1 in 0..d0.min(n1 + n2 + 1) {
                    let m2 = n1 + n2 - m1;
                    if m2 >= d1 {
                        continue;
                    }
                    let amp = beam_splitter_amplitude(t, r, n1, n2, m1);
                    matrix[(m1 * d1 + m2, n1 * d1 + n2)] = C64::new(amp, 0.0);
                }
            }
        }
        Ok(Self { matrix, specs })
    }

    /// Two-mode squeezer with `cosh²ξ = gain`, populated on the columns
    /// `|n, 0⟩` only: exact whenever the second mode starts in vacuum.
    pub fn squeezer_on_vacuum_idler(gain: f64, specs: [HilbertSpec; 2]) -> Result<Self> {
        if !gain.is_finite() || gain < 1.0 {
            return Err(invalid(format!("squeezer gain must be ≥ 1, got {gain}")));
        }
        let (d0, d1) = (specs[0].dim(), specs[1].dim());
        let ln_fact = ln_factorials(d0 + d1);
        let mut matrix = DMatrix::zeros(d0 * d1, d0 * d1);
        for n in 0..d0 {
            for k in 0..d1.min(d0 - n) {
                let amp = squeezer_amplitude(&ln_fact, gain, n, k);
                matrix[((n + k) * d1 + k, n * d1)] = C64::new(amp, 0.0);
            }
        }
        Ok(Self { matrix, specs })
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, rho: &TwoModeDensity) -> Result<TwoModeDensity> {
        if rho.specs.map(|s| s.dim()) != self.specs.map(|s| s.dim()) {
            return Err(Error::DimensionMismatch {
                expected: total_dim(&self.specs),
                found: total_dim(&rho.specs),
            });
        }
        let m = &self.matrix * &rho.matrix * self.matrix.adjoint();
        Ok(TwoModeDensity {
            matrix: hermitize(m),
            specs: rho.specs,
        })
    }
}
