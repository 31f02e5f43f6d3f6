//! Figures of merit for amplified states.

mod phase;
mod wigner;

pub use phase::{average, phase_averaged, phase_evaluations, phase_grid, PhaseMetric, DEFAULT_PHASES};
pub use wigner::{wigner, wigner_negativity, WignerGrid, NEGATIVITY_THRESHOLD};

use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};
use crate::fock::{DensityOperator, FockOperator, HilbertSpec, Ket};
use crate::schemes::AmplifierScheme;
use crate::truncation::TruncationPolicy;

/// `Tr(â ρ)/α`, the complex amplitude gain of a normalized state.
pub fn amplitude_ratio(rho: &DensityOperator, alpha: C64) -> Result<C64> {
    if alpha == C64::new(0.0, 0.0) || !alpha.is_finite() {
        return Err(invalid("effective gain needs a finite nonzero input amplitude"));
    }
    rho.require_normalized("effective_gain")?;
    let m = rho.matrix();
    let mean: C64 = (0..m.nrows() - 1)
        .map(|n| m[(n + 1, n)] * ((n + 1) as f64).sqrt())
        .sum();
    Ok(mean / alpha)
}

/// `G_e = |Tr(â ρ)/α|²`.
pub fn effective_gain(rho: &DensityOperator, alpha: C64) -> Result<f64> {
    Ok(amplitude_ratio(rho, alpha)?.norm_sqr())
}

/// `F = √⟨√G_e α|ρ|√G_e α⟩`.
pub fn fidelity_to_target(rho: &DensityOperator, alpha: C64, effective_gain: f64) -> Result<f64> {
    if !effective_gain.is_finite() || effective_gain < 0.0 {
        return Err(invalid(format!(
            "target gain must be finite and ≥ 0, got {effective_gain}"
        )));
    }
    rho.require_normalized("fidelity_to_target")?;
    let target = Ket::coherent(alpha * effective_gain.sqrt(), rho.spec())?;
    let c = target.amplitudes();
    let overlap = (c.adjoint() * rho.matrix() * c)[(0, 0)].re;
    Ok(overlap.max(0.0).sqrt())
}

/// Canonical phase sharpness `μ = Σ_n ⟨n+1|ρ|n⟩`.
pub fn phase_sharpness(rho: &DensityOperator) -> C64 {
    let m = rho.matrix();
    (0..m.nrows() - 1).map(|n| m[(n + 1, n)]).sum()
}

/// Holevo variance `1/|μ|² − 1`; `f64::INFINITY` when `|μ| ≤ num_tol`.
pub fn holevo_variance(rho: &DensityOperator) -> f64 {
    let mu = phase_sharpness(rho).norm();
    if mu <= rho.spec().num_tol() {
        f64::INFINITY
    } else {
        1.0 / (mu * mu) - 1.0
    }
}

/// Metrics of one scheme at one input amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub scheme: String,
    pub alpha: C64,
    /// PILA gain, when the scheme has one.
    pub gain: Option<f64>,
    pub amplitude_ratio: C64,
    pub effective_gain: f64,
    pub fidelity: f64,
    pub holevo_variance: f64,
    /// Physical success probability (detector-based schemes only).
    pub success_probability: Option<f64>,
    /// `Tr(Ô ρ Ô†)` for ideal operations.
    pub heralding_weight: Option<f64>,
}

/// A report together with the cutoff that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub report: MetricReport,
    pub spec: HilbertSpec,
    /// Probability missing from the amplifier output at this cutoff.
    pub deficit: f64,
}

/// Runs `scheme` on `|alpha⟩` with adaptive truncation and measures the output.
pub fn evaluate(scheme: &dyn AmplifierScheme, alpha: C64, policy: &TruncationPolicy) -> Result<Evaluation> {
    let ((report, deficit), spec) = policy.run(scheme.start_dim(alpha.norm()), |spec| {
        let out = scheme.amplify(alpha, spec)?;
        let ratio = amplitude_ratio(&out.state, alpha)?;
        let ge = ratio.norm_sqr();
        let report = MetricReport {
            scheme: scheme.name(),
            alpha,
            gain: scheme.pila_gain(),
            amplitude_ratio: ratio,
            effective_gain: ge,
            fidelity: fidelity_to_target(&out.state, alpha, ge)?,
            holevo_variance: holevo_variance(&out.state),
            success_probability: out.success_probability,
            heralding_weight: out.heralding_weight,
        };
        Ok((report, out.deficit))
    })?;
    Ok(Evaluation { report, spec, deficit })
}

/// Mean photon number `Tr(â†â ρ)` of a normalized state.
pub fn mean_photon_number(rho: &DensityOperator) -> Result<f64> {
    rho.require_normalized("mean_photon_number")?;
    Ok(rho.expectation(&FockOperator::number(rho.spec()))?.re)
}
