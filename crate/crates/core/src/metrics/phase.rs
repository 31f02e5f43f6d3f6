use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{evaluate, Evaluation, MetricReport};
use crate::error::{invalid, Result};
use crate::schemes::AmplifierScheme;
use crate::truncation::TruncationPolicy;

/// Quantity averaged over the input phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseMetric {
    /// `|mean_φ Tr(â ρ_φ)/α_φ|²`, the gain of the phase-averaged mean field.
    Gain,
    /// `mean_φ G_e(φ)`.
    MeanGain,
    /// `mean_φ F(φ)`, each phase measured against its own `√G_e(φ) α_φ`.
    Fidelity,
    /// `mean_φ V(φ)`.
    Holevo,
}

/// Default number of phases. The Holevo variance of the coherent operation is
/// sharply peaked near `φ = π/2` and needs this many for 1e−8 accuracy.
pub const DEFAULT_PHASES: usize = 256;

/// `φ_k = 2πk/n` for `k = 0..n`.
pub fn phase_grid(n_phases: usize) -> Vec<f64> {
    (0..n_phases).map(|k| TAU * k as f64 / n_phases as f64).collect()
}

/// Evaluations at inputs `|mod_alpha·e^{iφ_k}⟩`, in phase order.
pub fn phase_evaluations(
    scheme: &dyn AmplifierScheme,
    mod_alpha: f64,
    n_phases: usize,
    policy: &TruncationPolicy,
) -> Result<Vec<Evaluation>> {
    if n_phases < 8 {
        return Err(invalid(format!(
            "phase averaging needs at least 8 phases, got {n_phases}"
        )));
    }
    if !mod_alpha.is_finite() || mod_alpha <= 0.0 {
        return Err(invalid(format!("|α| must be finite and positive, got {mod_alpha}")));
    }
    phase_grid(n_phases)
        .into_par_iter()
        .map(|phi| evaluate(scheme, C64::from_polar(mod_alpha, phi), policy))
        .collect()
}

/// Reduces per-phase reports in their given order.
pub fn average(metric: PhaseMetric, reports: &[MetricReport]) -> f64 {
    let n = reports.len() as f64;
    match metric {
        PhaseMetric::Gain => (reports.iter().map(|r| r.amplitude_ratio).sum::<C64>() / n).norm_sqr(),
        PhaseMetric::MeanGain => reports.iter().map(|r| r.effective_gain).sum::<f64>() / n,
        PhaseMetric::Fidelity => reports.iter().map(|r| r.fidelity).sum::<f64>() / n,
        PhaseMetric::Holevo => reports.iter().map(|r| r.holevo_variance).sum::<f64>() / n,
    }
}

/// Averages `metric` over inputs `|mod_alpha·e^{iφ_k}⟩` at `n_phases` uniform phases.
///
/// Phases are evaluated in parallel; the reduction runs in phase order so the
/// result does not depend on scheduling.
pub fn phase_averaged(
    scheme: &dyn AmplifierScheme,
    metric: PhaseMetric,
    mod_alpha: f64,
    n_phases: usize,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let reports: Vec<MetricReport> = phase_evaluations(scheme, mod_alpha, n_phases, policy)?
        .into_iter()
        .map(|e| e.report)
        .collect();
    Ok(average(metric, &reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::PhotonicOp;
    use crate::schemes::PilaThenOp;
    use approx::assert_abs_diff_eq;

    const ALL: [PhaseMetric; 4] = [
        PhaseMetric::Gain,
        PhaseMetric::MeanGain,
        PhaseMetric::Fidelity,
        PhaseMetric::Holevo,
    ];

    #[test]
    fn covariant_operations_average_to_the_zero_phase_value() {
        let policy = TruncationPolicy::default();
        let scheme = PilaThenOp::new(1.2, PhotonicOp::Subtract(1)).unwrap();
        let at_zero = evaluate(&scheme, C64::new(0.2, 0.0), &policy).unwrap().report;
        let expected = [
            at_zero.effective_gain,
            at_zero.effective_gain,
            at_zero.fidelity,
            at_zero.holevo_variance,
        ];
        for (metric, want) in ALL.into_iter().zip(expected) {
            let got = phase_averaged(&scheme, metric, 0.2, 16, &policy).unwrap();
            assert_abs_diff_eq!(got, want, epsilon = 1e-8);
        }
    }

    #[test]
    fn doubling_the_phase_count_converges() {
        let policy = TruncationPolicy::default();
        let scheme = PilaThenOp::new(1.2, PhotonicOp::coherent(0.5).unwrap()).unwrap();
        for metric in ALL {
            let a = phase_averaged(&scheme, metric, 0.2, DEFAULT_PHASES, &policy).unwrap();
            let b = phase_averaged(&scheme, metric, 0.2, 2 * DEFAULT_PHASES, &policy).unwrap();
            assert!((a - b).abs() < 1e-8, "{metric:?}: {a} vs {b}");
        }
    }

    #[test]
    fn rejects_too_few_phases() {
        let scheme = PilaThenOp::new(1.2, PhotonicOp::Add(1)).unwrap();
        assert!(phase_averaged(&scheme, PhaseMetric::Gain, 0.2, 4, &TruncationPolicy::default()).is_err());
    }
}
