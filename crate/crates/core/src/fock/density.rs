use super::{DMatrix, FockOperator, HilbertSpec, C64};
use crate::error::{invalid, Error, Result};

/// Hermitian positive-semidefinite matrix in the Fock basis.
///
/// `weight` is the trace at construction: 1 for normalized states, the
/// heralding weight or success probability for conditional branches.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<C64>,
    spec: HilbertSpec,
    weight: f64,
}

impl DensityOperator {
    /// Validating constructor: square `dim × dim`, Hermitian and PSD within `num_tol`.
    pub fn new(matrix: DMatrix<C64>, spec: HilbertSpec) -> Result<Self> {
        if matrix.nrows() != spec.dim() || matrix.ncols() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("density matrix has non-finite entries"));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > spec.num_tol() {
            return Err(invalid(format!("matrix is not Hermitian (defect {defect:.3e})")));
        }
        let weight = matrix.trace().re;
        let state = Self { matrix, spec, weight };
        let min_eig = state.min_eigenvalue();
        if min_eig < -spec.num_tol() * state.weight.max(1.0) {
            return Err(invalid(format!(
                "matrix is not positive semidefinite (eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(state)
    }

    /// Trusted constructor for matrices built by this crate (`O ρ O†`, projectors).
    pub(crate) fn from_parts(matrix: DMatrix<C64>, spec: HilbertSpec) -> Self {
        let weight = matrix.trace().re;
        let state = Self { matrix, spec, weight };
        #[cfg(debug_assertions)]
        state.debug_check();
        state
    }

    #[cfg(debug_assertions)]
    fn debug_check(&self) {
        // the eigenvalue scan is O(dim³); small cutoffs exercise the same code paths
        const EIGEN_CHECK_MAX_DIM: usize = 64;
        let tol = self.spec.num_tol() * self.weight.abs().max(1.0);
        debug_assert!(
            hermiticity_defect(&self.matrix) <= tol,
            "constructed density operator is not Hermitian"
        );
        if self.spec.dim() > EIGEN_CHECK_MAX_DIM {
            return;
        }
        let min_eig = self.min_eigenvalue();
        debug_assert!(
            min_eig >= -tol,
            "constructed density operator has eigenvalue {min_eig} (dim {}, trace {}, non-finite {})",
            self.spec.dim(),
            self.weight,
            self.matrix
                .iter()
                .filter(|z| !z.re.is_finite() || !z.im.is_finite())
                .count()
        );
    }

    /// Thermal state with occupation `n̄`: `diag(n̄^n / (1+n̄)^{n+1})`.
    pub fn thermal(nbar: f64, spec: HilbertSpec) -> Result<Self> {
        if !nbar.is_finite() || nbar < 0.0 {
            return Err(invalid(format!(
                "thermal occupation must be finite and ≥ 0, got {nbar}"
            )));
        }
        let dim = spec.dim();
        let ratio = nbar / (1.0 + nbar);
        let leaked = ratio.powi(dim as i32);
        if leaked > spec.trunc_tol() {
            return Err(Error::Truncation {
                dim,
                leaked,
                tolerance: spec.trunc_tol(),
            });
        }
        let mut p = 1.0 / (1.0 + nbar);
        let mut matrix = DMatrix::zeros(dim, dim);
        for n in 0..dim {
            matrix[(n, n)] = C64::new(p, 0.0);
            p *= ratio;
        }
        Ok(Self::from_parts(matrix, spec))
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        (self.trace() - 1.0).abs() <= self.spec.num_tol()
    }

    pub(crate) fn require_normalized(&self, what: &str) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(invalid(format!(
                "{what} requires a normalized state (trace {})",
                self.trace()
            )))
        }
    }

    /// Returns the unit-trace state and the prior trace.
    pub fn normalize(&self) -> Result<(DensityOperator, f64)> {
        let trace = self.trace();
        if trace <= self.spec.num_tol() {
            return Err(Error::ZeroTrace { trace });
        }
        let matrix = self.matrix.unscale(trace);
        Ok((
            Self {
                matrix,
                spec: self.spec,
                weight: 1.0,
            },
            trace,
        ))
    }

    /// `Tr(op·ρ) / Tr(ρ)`.
    pub fn expectation(&self, op: &FockOperator) -> Result<C64> {
        self.check_dim(op.spec().dim())?;
        let trace = self.trace();
        if trace <= self.spec.num_tol() {
            return Err(Error::ZeroTrace { trace });
        }
        let tr = trace_of_product(op.matrix(), &self.matrix);
        Ok(tr / trace)
    }

    pub fn mean_photon_number(&self) -> Result<f64> {
        let trace = self.trace();
        if trace <= self.spec.num_tol() {
            return Err(Error::ZeroTrace { trace });
        }
        let n: f64 = (0..self.spec.dim()).map(|k| k as f64 * self.matrix[(k, k)].re).sum();
        Ok(n / trace)
    }

    /// `O ρ O†`, keeping the resulting trace as weight.
    pub fn conjugated_by(&self, op: &FockOperator) -> Result<DensityOperator> {
        self.check_dim(op.spec().dim())?;
        let m = op.matrix() * &self.matrix * op.matrix().adjoint();
        Ok(Self::from_parts(hermitize(m), self.spec))
    }

    /// `e^{iθn̂} ρ e^{−iθn̂}`.
    pub fn phase_rotated(&self, theta: f64) -> DensityOperator {
        let mut m = self.matrix.clone();
        for ((r, c), z) in m
            .iter_mut()
            .enumerate()
            .map(|(i, z)| ((i % self.spec.dim(), i / self.spec.dim()), z))
        {
            *z *= C64::from_polar(1.0, theta * (r as f64 - c as f64));
        }
        Self {
            matrix: m,
            spec: self.spec,
            weight: self.weight,
        }
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = hermitize(self.matrix.clone());
        let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
        // nalgebra's tridiagonal sweeps occasionally return -inf when tail entries
        // sit near the underflow range; dropping them moves eigenvalues by < dim·floor
        let mut min = f64::NAN;
        for rel in [0.0, 1e-150, 1e-100, 1e-60, 1e-30] {
            let floor = rel * scale;
            let flushed = h.map(|z| if z.norm() < floor { C64::new(0.0, 0.0) } else { z });
            min = flushed
                .symmetric_eigenvalues()
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            if min.is_finite() {
                break;
            }
        }
        min
    }

    /// Same matrix, embedded into (or cut down to) a different dimension.
    pub fn resized(&self, spec: HilbertSpec) -> DensityOperator {
        let d = spec.dim().min(self.spec.dim());
        let mut m = DMatrix::zeros(spec.dim(), spec.dim());
        m.view_mut((0, 0), (d, d)).copy_from(&self.matrix.view((0, 0), (d, d)));
        Self::from_parts(m, spec)
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.dim(),
                found: dim,
            });
        }
        Ok(())
    }
}

/// Largest entry of `|M − M†|`.
pub(crate) fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// `(M + M†)/2`, removing rounding asymmetry from products like `O ρ O†`.
pub(crate) fn hermitize(m: DMatrix<C64>) -> DMatrix<C64> {
    let adj = m.adjoint();
    (m + adj).scale(0.5)
}

/// `Tr(A·B)` without forming the product.
pub(crate) fn trace_of_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Ket;
    use approx::assert_abs_diff_eq;

    fn spec(dim: usize) -> HilbertSpec {
        HilbertSpec::new(dim).unwrap()
    }

    #[test]
    fn min_eigenvalue_survives_underflowing_tails() {
        // the plain solver returned -inf for these projectors
        for (phi, dim) in [(0.3, 71), (1.0, 100), (2.5, 142)] {
            let psi = Ket::coherent(C64::from_polar(0.2, phi), spec(dim)).unwrap();
            let e = psi.projector().min_eigenvalue();
            assert!(e.is_finite() && e.abs() < 1e-12, "phi {phi}, dim {dim}: {e}");
        }
    }

    #[test]
    fn thermal_populations_follow_geometric_series() {
        let rho = DensityOperator::thermal(0.2, spec(30)).unwrap();
        let m = rho.matrix();
        assert_abs_diff_eq!(m[(0, 0)].re, 1.0 / 1.2, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 1)].re, 0.2 / 1.44, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(2, 2)].re, 0.04 / 1.728, epsilon = 1e-15);
        assert!(rho.trace() > 1.0 - 1e-10);
        assert_abs_diff_eq!(rho.mean_photon_number().unwrap(), 0.2, epsilon = 1e-9);
    }

    #[test]
    fn zero_temperature_is_vacuum() {
        let rho = DensityOperator::thermal(0.0, spec(4)).unwrap();
        assert_eq!(rho.matrix()[(0, 0)].re, 1.0);
        assert_eq!(rho.trace(), 1.0);
    }

    #[test]
    fn thermal_rejects_short_truncation_and_negative_occupation() {
        assert!(matches!(
            DensityOperator::thermal(2.0, spec(10)),
            Err(Error::Truncation { .. })
        ));
        assert!(DensityOperator::thermal(-0.1, spec(10)).is_err());
    }

    #[test]
    fn normalize_returns_prior_trace() {
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 0)] = C64::new(0.5, 0.0);
        let rho = DensityOperator::new(m, spec(3)).unwrap();
        let (n, w) = rho.normalize().unwrap();
        assert_eq!(w, 0.5);
        assert_eq!(n.matrix()[(0, 0)].re, 1.0);
        assert_eq!(n.weight(), 1.0);
    }

    #[test]
    fn zero_trace_is_an_error() {
        let rho = DensityOperator::new(DMatrix::zeros(3, 3), spec(3)).unwrap();
        assert!(matches!(rho.normalize(), Err(Error::ZeroTrace { .. })));
        let a = FockOperator::annihilation(spec(3));
        assert!(matches!(rho.expectation(&a), Err(Error::ZeroTrace { .. })));
    }

    #[test]
    fn validating_constructor_rejects_bad_matrices() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(DensityOperator::new(m, spec(2)).is_err());
        let mut neg = DMatrix::zeros(2, 2);
        neg[(0, 0)] = C64::new(-0.5, 0.0);
        assert!(DensityOperator::new(neg, spec(2)).is_err());
        assert!(matches!(
            DensityOperator::new(DMatrix::zeros(3, 3), spec(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coherent_expectation_values() {
        let alpha = C64::new(0.3, 0.4);
        let rho = Ket::coherent(alpha, spec(40)).unwrap().projector();
        let a = FockOperator::annihilation(spec(40));
        assert_abs_diff_eq!((rho.expectation(&a).unwrap() - alpha).norm(), 0.0, epsilon = 1e-12);
        let th = DensityOperator::thermal(0.7, spec(120)).unwrap();
        let n = FockOperator::number(spec(120));
        assert_abs_diff_eq!(th.expectation(&n).unwrap().re, 0.7, epsilon = 1e-9);
    }

    #[test]
    fn phase_rotation_rotates_the_mean_amplitude() {
        let alpha = C64::new(0.5, 0.0);
        let rho = Ket::coherent(alpha, spec(40)).unwrap().projector();
        let rotated = rho.phase_rotated(std::f64::consts::FRAC_PI_2);
        let a = FockOperator::annihilation(spec(40));
        let mean = rotated.expectation(&a).unwrap();
        assert_abs_diff_eq!((mean - C64::new(0.0, 0.5)).norm(), 0.0, epsilon = 1e-12);
    }
}
