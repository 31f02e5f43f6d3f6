//! N-scissor noiseless amplifier: closed-form filter and circuit-level oracle.

mod oracle;

pub use oracle::circuit_oracle;

use num_complex::Complex64 as C64;

use crate::channels::Heralded;
use crate::error::{invalid, Error, Result};
use crate::fock::{DensityOperator, FockOperator, HilbertSpec, Ket};

/// `N` parallel scissors with amplitude gain `g` each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScissorConfig {
    arms: usize,
    gain: f64,
    spec: HilbertSpec,
}

impl ScissorConfig {
    pub fn new(arms: usize, gain: f64, spec: HilbertSpec) -> Result<Self> {
        if arms == 0 {
            return Err(invalid("scissor network needs at least one arm"));
        }
        if !gain.is_finite() || gain <= 0.0 {
            return Err(invalid(format!("scissor gain must be finite and positive, got {gain}")));
        }
        Ok(Self { arms, gain, spec })
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn spec(&self) -> HilbertSpec {
        self.spec
    }

    /// Reflectivity `η` of the ancilla splitter, from `g² = (1 − η)/η`.
    pub fn eta(&self) -> f64 {
        1.0 / (1.0 + self.gain * self.gain)
    }

    /// Heralding patterns that succeed up to a known phase correction: 2 per arm.
    pub fn pattern_multiplicity(&self) -> f64 {
        2f64.powi(self.arms as i32)
    }

    /// `g^n N!/(N^n (N−n)!)` for `n ≤ N`, zero above.
    pub fn coefficient(&self, n: usize) -> f64 {
        if n > self.arms {
            return 0.0;
        }
        let nf = self.arms as f64;
        (0..n).fold(1.0, |acc, k| acc * self.gain * (nf - k as f64) / nf)
    }
}

/// Diagonal filter `M_N = Σ_{n≤N} g^n N!/(N^n (N−n)!) |n⟩⟨n|`.
pub fn scissor_filter(cfg: &ScissorConfig) -> FockOperator {
    FockOperator::diagonal(cfg.spec, |n| cfg.coefficient(n))
}

/// Filters `psi` and returns the normalized output with
/// `P_s = ‖M_N ψ‖² / (1 + g²)^N`, the probability summed over all heralding
/// patterns. One fixed pattern succeeds with `P_s / 2^N`.
pub fn scissor_amplify(psi: &Ket, cfg: &ScissorConfig) -> Result<Heralded> {
    check_input(psi, cfg)?;
    let filtered: Vec<C64> = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| c * cfg.coefficient(n))
        .collect();
    // ‖Mψ‖ exceeds 1 for g > 1, so no norm check on the filtered ket
    let mut out = output_state(filtered, cfg.spec)?;
    out.success_probability /= (1.0 + cfg.gain * cfg.gain).powi(cfg.arms as i32);
    Ok(out)
}

fn check_input(psi: &Ket, cfg: &ScissorConfig) -> Result<()> {
    if psi.spec().dim() != cfg.spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: cfg.spec.dim(),
            found: psi.spec().dim(),
        });
    }
    let defect = (psi.norm_sqr() - 1.0).abs();
    if defect > cfg.spec.trunc_tol() + cfg.spec.num_tol() {
        return Err(invalid(format!(
            "scissor input must be normalized (|norm² − 1| = {defect:.3e})"
        )));
    }
    Ok(())
}

/// Normalizes the conditional ket `amps`; `success_probability` is its norm².
pub(crate) fn output_state(amps: Vec<C64>, spec: HilbertSpec) -> Result<Heralded> {
    let branch: DensityOperator = Ket::unchecked(amps.into(), spec).projector();
    let p = branch.trace();
    if p <= spec.num_tol() {
        return Err(Error::ZeroTrace { trace: p });
    }
    Ok(Heralded {
        state: branch.normalize()?.0,
        success_probability: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::fidelity_to_target;
    use approx::assert_abs_diff_eq;

    fn spec(dim: usize) -> HilbertSpec {
        HilbertSpec::new(dim).unwrap()
    }

    #[test]
    fn filter_coefficients() {
        let s = spec(8);
        let one = ScissorConfig::new(1, 1.7, s).unwrap();
        let d = scissor_filter(&one).matrix().diagonal();
        assert_abs_diff_eq!(d[0].re, 1.0);
        assert_abs_diff_eq!(d[1].re, 1.7);
        assert!(d.iter().skip(2).all(|z| *z == C64::new(0.0, 0.0)));
        let two = ScissorConfig::new(2, 1.3, s).unwrap();
        assert_abs_diff_eq!(two.coefficient(2), 1.3 * 1.3 / 2.0, epsilon = 1e-15);
        // large N approaches g^n
        let many = ScissorConfig::new(10_000_000, 1.5, s).unwrap();
        assert_abs_diff_eq!(many.coefficient(3), 1.5f64.powi(3), epsilon = 1e-4);
    }

    #[test]
    fn vacuum_passes_with_ancilla_cost() {
        let s = spec(10);
        let cfg = ScissorConfig::new(3, 1.5, s).unwrap();
        let h = scissor_amplify(&Ket::fock(0, s).unwrap(), &cfg).unwrap();
        assert_abs_diff_eq!(h.state.matrix()[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.success_probability, 1.0 / 3.25f64.powi(3), epsilon = 1e-15);
    }

    #[test]
    fn weak_input_unit_gain_succeeds_half_the_time() {
        let s = spec(20);
        let cfg = ScissorConfig::new(1, 1.0, s).unwrap();
        let h = scissor_amplify(&Ket::coherent(C64::new(0.01, 0.0), s).unwrap(), &cfg).unwrap();
        assert_abs_diff_eq!(h.success_probability, 0.5, epsilon = 1e-4);
    }

    #[test]
    fn output_support_and_success_ordering() {
        let s = spec(30);
        let psi = Ket::coherent(C64::new(0.8, 0.3), s).unwrap();
        let mut last_p = 1.0;
        for arms in 1..=5 {
            let cfg = ScissorConfig::new(arms, 1.4, s).unwrap();
            let h = scissor_amplify(&psi, &cfg).unwrap();
            let m = h.state.matrix();
            for i in 0..30 {
                for j in 0..30 {
                    if i > arms || j > arms {
                        assert!(m[(i, j)].norm() < 1e-12);
                    }
                }
            }
            assert!(h.success_probability > 0.0 && h.success_probability <= last_p);
            last_p = h.success_probability;
        }
    }

    #[test]
    fn weak_inputs_approach_the_amplified_target() {
        let s = spec(20);
        let (g, a) = (1.8f64, 0.05f64);
        let alpha = C64::new(a, 0.0);
        let psi = Ket::coherent(alpha, s).unwrap();
        let mut last = 0.0;
        for arms in 1..=4 {
            let cfg = ScissorConfig::new(arms, g, s).unwrap();
            let f = fidelity_to_target(&scissor_amplify(&psi, &cfg).unwrap().state, alpha, g * g).unwrap();
            assert!(f > last);
            if arms >= 2 {
                assert!(f > 1.0 - 10.0 * g.powi(4) * a.powi(4));
            }
            last = f;
        }
    }

    #[test]
    fn rejects_bad_configs_and_inputs() {
        let s = spec(10);
        assert!(ScissorConfig::new(0, 1.0, s).is_err());
        assert!(ScissorConfig::new(1, 0.0, s).is_err());
        let cfg = ScissorConfig::new(1, 1.0, s).unwrap();
        let other = Ket::fock(0, spec(12)).unwrap();
        assert!(matches!(
            scissor_amplify(&other, &cfg),
            Err(Error::DimensionMismatch { .. })
        ));
        let two = Ket::fock(2, s).unwrap();
        assert!(matches!(scissor_amplify(&two, &cfg), Err(Error::ZeroTrace { .. })));
    }
}
