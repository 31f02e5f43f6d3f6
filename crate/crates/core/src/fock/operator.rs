use std::ops::{Add, Mul};

use super::special::displacement_matrix;
use super::{DMatrix, HilbertSpec, Ket, C64};
use crate::error::{Error, Result};

/// General complex operator on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    matrix: DMatrix<C64>,
    spec: HilbertSpec,
}

impl FockOperator {
    pub fn new(matrix: DMatrix<C64>, spec: HilbertSpec) -> Result<Self> {
        if matrix.nrows() != spec.dim() || matrix.ncols() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { matrix, spec })
    }

    pub fn identity(spec: HilbertSpec) -> Self {
        Self {
            matrix: DMatrix::identity(spec.dim(), spec.dim()),
            spec,
        }
    }

    /// `â` with `⟨n−1|â|n⟩ = √n`.
    pub fn annihilation(spec: HilbertSpec) -> Self {
        let dim = spec.dim();
        let mut matrix = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            matrix[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
        }
        Self { matrix, spec }
    }

    /// `â†`, the conjugate transpose of [`annihilation`](Self::annihilation).
    /// In the truncated space it maps `|dim−1⟩` to zero.
    pub fn creation(spec: HilbertSpec) -> Self {
        Self::annihilation(spec).adjoint()
    }

    /// `n̂ = â†â`.
    pub fn number(spec: HilbertSpec) -> Self {
        Self::diagonal(spec, |n| n as f64)
    }

    /// Photon-number parity `Σ (−1)^n |n⟩⟨n|`.
    pub fn parity(spec: HilbertSpec) -> Self {
        Self::diagonal(spec, |n| if n % 2 == 0 { 1.0 } else { -1.0 })
    }

    pub fn diagonal(spec: HilbertSpec, f: impl Fn(usize) -> f64) -> Self {
        let dim = spec.dim();
        let mut matrix = DMatrix::zeros(dim, dim);
        for n in 0..dim {
            matrix[(n, n)] = C64::new(f(n), 0.0);
        }
        Self { matrix, spec }
    }

    /// `D(β) = exp(β â† − β* â)`, from the associated-Laguerre closed form.
    /// Exact entrywise; unitarity holds on the low-photon block only.
    pub fn displacement(beta: C64, spec: HilbertSpec) -> Self {
        Self {
            matrix: displacement_matrix(beta, spec.dim()),
            spec,
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            spec: self.spec,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            matrix: self.matrix.map(|z| z * s),
            spec: self.spec,
        }
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut out = Self::identity(self.spec);
        for _ in 0..m {
            out.matrix = &out.matrix * &self.matrix;
        }
        out
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        if ket.spec().dim() != self.spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.dim(),
                found: ket.spec().dim(),
            });
        }
        let v = &self.matrix * ket.amplitudes();
        // may exceed unit norm (e.g. â†), so skip the validating constructor
        Ok(Ket::unchecked(v, ket.spec()))
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &FockOperator) -> FockOperator {
        Self {
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
            spec: self.spec,
        }
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;

    fn mul(self, rhs: &FockOperator) -> FockOperator {
        FockOperator {
            matrix: &self.matrix * &rhs.matrix,
            spec: self.spec,
        }
    }
}

impl Add for &FockOperator {
    type Output = FockOperator;

    fn add(self, rhs: &FockOperator) -> FockOperator {
        FockOperator {
            matrix: &self.matrix + &rhs.matrix,
            spec: self.spec,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(dim: usize) -> HilbertSpec {
        HilbertSpec::new(dim).unwrap()
    }

    #[test]
    fn ladder_actions_on_number_states() {
        let s = spec(6);
        let a = FockOperator::annihilation(s);
        let vac = a.apply(&Ket::fock(0, s).unwrap()).unwrap();
        assert_eq!(vac.norm_sqr(), 0.0);
        let three = a.apply(&Ket::fock(3, s).unwrap()).unwrap();
        assert_abs_diff_eq!(three.amplitudes()[2].re, 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(three.norm_sqr(), 3.0, epsilon = 1e-14);
        let top = FockOperator::creation(s).apply(&Ket::fock(5, s).unwrap()).unwrap();
        assert_eq!(top.norm_sqr(), 0.0);
    }

    #[test]
    fn canonical_commutator_below_the_cutoff() {
        let s = spec(8);
        let a = FockOperator::annihilation(s);
        let c = a.commutator(&a.adjoint());
        for r in 0..7 {
            for col in 0..7 {
                let expected = if r == col { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(
                    (c.matrix()[(r, col)] - C64::new(expected, 0.0)).norm(),
                    0.0,
                    epsilon = 1e-14
                );
            }
        }
        // the truncation shows up only in the last diagonal entry
        assert_abs_diff_eq!(c.matrix()[(7, 7)].re, -7.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_displacement_is_identity() {
        let d = FockOperator::displacement(C64::new(0.0, 0.0), spec(5));
        assert_eq!(d, FockOperator::identity(spec(5)));
    }

    #[test]
    fn displacement_column_zero_is_coherent_ket() {
        let beta = C64::new(0.6, 0.2);
        let s = spec(40);
        let d = FockOperator::displacement(beta, s);
        let coh = Ket::coherent(beta, s).unwrap();
        let col = d.matrix().column(0).into_owned();
        assert!((col - coh.amplitudes()).camax() < 1e-10);
    }

    #[test]
    fn displacement_inverse_on_low_block() {
        let beta = C64::new(0.8, -0.3);
        let s = spec(60);
        let prod = &FockOperator::displacement(beta, s) * &FockOperator::displacement(-beta, s);
        let block = 20;
        for r in 0..block {
            for c in 0..block {
                let expected = if r == c { 1.0 } else { 0.0 };
                assert!((prod.matrix()[(r, c)] - C64::new(expected, 0.0)).norm() < 10.0 * s.trunc_tol());
            }
        }
    }
}
