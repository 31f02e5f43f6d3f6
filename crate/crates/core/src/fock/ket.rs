use super::{DMatrix, DVector, DensityOperator, HilbertSpec, C64};
use crate::error::{invalid, Error, Result};

/// Pure state in the truncated Fock basis. May be subnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: DVector<C64>,
    spec: HilbertSpec,
}

impl Ket {
    pub fn new(amplitudes: DVector<C64>, spec: HilbertSpec) -> Result<Self> {
        if amplitudes.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm_squared();
        if !norm.is_finite() || norm > 1.0 + spec.num_tol() {
            return Err(invalid(format!("ket norm² {norm} exceeds 1")));
        }
        Ok(Self { amplitudes, spec })
    }

    /// Number state `|n⟩`.
    pub fn fock(n: usize, spec: HilbertSpec) -> Result<Self> {
        if n >= spec.dim() {
            return Err(Error::Truncation {
                dim: spec.dim(),
                leaked: 1.0,
                tolerance: spec.trunc_tol(),
            });
        }
        let mut amplitudes = DVector::zeros(spec.dim());
        amplitudes[n] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes, spec })
    }

    /// Coherent state `|α⟩` with `c_n = e^{−|α|²/2} α^n/√n!`.
    ///
    /// Fails with [`Error::Truncation`] when the mass beyond `dim` exceeds
    /// `trunc_tol`.
    pub fn coherent(alpha: C64, spec: HilbertSpec) -> Result<Self> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(invalid("coherent amplitude must be finite"));
        }
        let dim = spec.dim();
        let mut amplitudes = DVector::zeros(dim);
        let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        for n in 0..dim {
            amplitudes[n] = c;
            c = c * alpha / ((n + 1) as f64).sqrt();
        }
        let leaked = (1.0 - amplitudes.norm_squared()).max(0.0);
        if leaked > spec.trunc_tol() {
            return Err(Error::Truncation {
                dim,
                leaked,
                tolerance: spec.trunc_tol(),
            });
        }
        Ok(Self { amplitudes, spec })
    }

    pub(crate) fn unchecked(amplitudes: DVector<C64>, spec: HilbertSpec) -> Self {
        Self { amplitudes, spec }
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        if self.spec.dim() != other.spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.dim(),
                found: other.spec.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|ψ⟩⟨ψ|`, with weight equal to the squared norm.
    pub fn projector(&self) -> DensityOperator {
        let m: DMatrix<C64> = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator::from_parts(m, self.spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_from_zero_amplitude() {
        let k = Ket::coherent(C64::new(0.0, 0.0), HilbertSpec::new(5).unwrap()).unwrap();
        assert_eq!(k.amplitudes()[0], C64::new(1.0, 0.0));
        assert!(k.amplitudes().iter().skip(1).all(|c| c.norm() == 0.0));
    }

    #[test]
    fn small_coherent_state_coefficients() {
        let k = Ket::coherent(C64::new(0.2, 0.0), HilbertSpec::new(20).unwrap()).unwrap();
        // c0 = e^{-0.02}, c1 = 0.2 e^{-0.02}
        assert_abs_diff_eq!(k.amplitudes()[0].re, 0.980199, epsilon = 1e-6);
        assert_abs_diff_eq!(k.amplitudes()[1].re, 0.196040, epsilon = 1e-6);
        assert_abs_diff_eq!(k.norm_sqr(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn short_truncation_is_reported() {
        let err = Ket::coherent(C64::new(1.0, 0.0), HilbertSpec::new(2).unwrap()).unwrap_err();
        match err {
            Error::Truncation { leaked, .. } => {
                // 1 − e^{-1}(1 + 1)
                assert_abs_diff_eq!(leaked, 1.0 - 2.0 * (-1f64).exp(), epsilon = 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_length_and_overnormalized() {
        let spec = HilbertSpec::new(3).unwrap();
        assert!(matches!(
            Ket::new(DVector::zeros(4), spec),
            Err(Error::DimensionMismatch { .. })
        ));
        let big = DVector::from_element(3, C64::new(1.0, 0.0));
        assert!(Ket::new(big, spec).is_err());
        assert!(Ket::fock(3, spec).is_err());
    }
}
