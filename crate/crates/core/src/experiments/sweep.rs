use std::fmt;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::table::{Row, Table};
use crate::error::{invalid, Result};
use crate::metrics::{average, evaluate, phase_evaluations, PhaseMetric};
use crate::schemes::{SchemeParams, SchemeRegistry};
use crate::truncation::TruncationPolicy;

/// Parameter varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Gain,
    Ratio,
    Transmittance,
    ScissorGain,
    AlphaMod,
    Phase,
}

impl SweepVar {
    pub fn column(&self) -> &'static str {
        match self {
            Self::Gain => "G",
            Self::Ratio => "r",
            Self::Transmittance => "T",
            Self::ScissorGain => "g",
            Self::AlphaMod => "alpha_mod",
            Self::Phase => "phi",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "G" | "gain" => Self::Gain,
            "r" | "ratio" => Self::Ratio,
            "T" | "transmittance" => Self::Transmittance,
            "g" | "scissor_gain" => Self::ScissorGain,
            "alpha_mod" => Self::AlphaMod,
            "phi" | "phase" => Self::Phase,
            other => return Err(invalid(format!("unknown sweep variable '{other}'"))),
        })
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

/// Metric columns a sweep can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Output {
    EffectiveGain,
    Fidelity,
    Holevo,
    SuccessProbability,
}

impl Output {
    pub const ALL: [Output; 4] = [
        Self::EffectiveGain,
        Self::Fidelity,
        Self::Holevo,
        Self::SuccessProbability,
    ];

    pub fn column(&self) -> &'static str {
        match self {
            Self::EffectiveGain => "Ge",
            Self::Fidelity => "F",
            Self::Holevo => "V",
            Self::SuccessProbability => "Ps",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.column() == s)
            .ok_or_else(|| invalid(format!("unknown output '{s}' (expected Ge, F, V or Ps)")))
    }
}

/// One scheme evaluated along one parameter axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    /// Registry name of the scheme.
    pub scheme: String,
    /// Fixed parameters; the swept one is overwritten per point.
    pub params: SchemeParams,
    pub alpha_mod: f64,
    pub phase: f64,
    pub var: SweepVar,
    /// `(lo, hi, steps)`, endpoints included.
    pub range: (f64, f64, usize),
    pub outputs: Vec<Output>,
    /// Average every point over this many input phases.
    pub n_phases: Option<usize>,
}

impl SweepPlan {
    pub fn validate(&self, registry: &SchemeRegistry) -> Result<()> {
        let (lo, hi, steps) = self.range;
        if steps < 2 || !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(invalid(format!(
                "sweep range needs lo < hi and steps ≥ 2, got ({lo}, {hi}, {steps})"
            )));
        }
        if self.outputs.is_empty() {
            return Err(invalid("sweep requests no outputs"));
        }
        if !self.alpha_mod.is_finite() || self.alpha_mod <= 0.0 {
            return Err(invalid(format!(
                "|α| must be finite and positive, got {}",
                self.alpha_mod
            )));
        }
        if let Some(n) = self.n_phases {
            if n < 8 {
                return Err(invalid(format!("phase averaging needs at least 8 phases, got {n}")));
            }
            if self.var == SweepVar::Phase {
                return Err(invalid("cannot sweep the phase while averaging over it"));
            }
        }
        let probe = registry.build(&self.scheme, &self.point_params(lo).0)?;
        if self.outputs.contains(&Output::SuccessProbability) && !probe.is_physical() {
            return Err(invalid(format!(
                "success probability is only defined for detector-based schemes, not '{}'",
                self.scheme
            )));
        }
        Ok(())
    }

    fn point_params(&self, x: f64) -> (SchemeParams, C64) {
        let mut p = self.params;
        let (mut mod_alpha, mut phase) = (self.alpha_mod, self.phase);
        match self.var {
            SweepVar::Gain => p.gain = x,
            SweepVar::Ratio => p.ratio_r = x,
            SweepVar::Transmittance => p.transmittance = x,
            SweepVar::ScissorGain => p.scissor_gain = x,
            SweepVar::AlphaMod => mod_alpha = x,
            SweepVar::Phase => phase = x,
        }
        (p, C64::from_polar(mod_alpha, phase))
    }
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// Evaluates every point of `plan` (in parallel) into a table ordered like the plan.
///
/// Columns: the swept variable, the requested outputs, then `dim` and `deficit`.
/// A failing point keeps its row with NaN values and the error message.
pub fn run_sweep(plan: &SweepPlan, registry: &SchemeRegistry, policy: &TruncationPolicy) -> Result<Table> {
    plan.validate(registry)?;
    let mut table = Table::new(
        std::iter::once(plan.var.column())
            .chain(plan.outputs.iter().map(Output::column))
            .chain(["dim", "deficit"]),
    );
    let (lo, hi, steps) = plan.range;
    table.rows = linspace(lo, hi, steps)
        .into_par_iter()
        .map(|x| {
            let start = Instant::now();
            let mut values = vec![x];
            let error = match sweep_point(plan, registry, policy, x) {
                Ok((metrics, dim, deficit)) => {
                    values.extend(plan.outputs.iter().map(|o| metrics[*o as usize]));
                    values.extend([dim as f64, deficit]);
                    None
                }
                Err(e) => {
                    values.extend(std::iter::repeat_n(f64::NAN, plan.outputs.len() + 2));
                    Some(e.to_string())
                }
            };
            Row {
                values,
                elapsed: start.elapsed(),
                error,
            }
        })
        .collect();
    Ok(table)
}

/// `[G_e, F, V, P_s]`, the largest cutoff used and the largest deficit.
fn sweep_point(
    plan: &SweepPlan,
    registry: &SchemeRegistry,
    policy: &TruncationPolicy,
    x: f64,
) -> Result<([f64; 4], usize, f64)> {
    let (params, alpha) = plan.point_params(x);
    let scheme = registry.build(&plan.scheme, &params)?;
    match plan.n_phases {
        None => {
            let e = evaluate(scheme.as_ref(), alpha, policy)?;
            let r = &e.report;
            let ps = r.success_probability.unwrap_or(f64::NAN);
            Ok((
                [r.effective_gain, r.fidelity, r.holevo_variance, ps],
                e.spec.dim(),
                e.deficit,
            ))
        }
        Some(n) => {
            let evals = phase_evaluations(scheme.as_ref(), alpha.norm(), n, policy)?;
            let dim = evals.iter().map(|e| e.spec.dim()).max().unwrap_or(0);
            let deficit = evals.iter().map(|e| e.deficit).fold(0.0, f64::max);
            let reports: Vec<_> = evals.into_iter().map(|e| e.report).collect();
            let ps = if reports.iter().all(|r| r.success_probability.is_some()) {
                reports.iter().filter_map(|r| r.success_probability).sum::<f64>() / reports.len() as f64
            } else {
                f64::NAN
            };
            Ok((
                [
                    average(PhaseMetric::Gain, &reports),
                    average(PhaseMetric::Fidelity, &reports),
                    average(PhaseMetric::Holevo, &reports),
                    ps,
                ],
                dim,
                deficit,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(scheme: &str) -> SweepPlan {
        SweepPlan {
            scheme: scheme.into(),
            params: SchemeParams::default(),
            alpha_mod: 0.2,
            phase: 0.0,
            var: SweepVar::Gain,
            range: (1.0, 2.0, 5),
            outputs: vec![Output::EffectiveGain, Output::Fidelity],
            n_phases: None,
        }
    }

    #[test]
    fn linspace_hits_both_ends() {
        assert_eq!(linspace(1.0, 2.5, 4), vec![1.0, 1.5, 2.0, 2.5]);
    }

    #[test]
    fn pila_sweep_reproduces_the_gain() {
        let reg = SchemeRegistry::with_builtins();
        let t = run_sweep(&plan("pila"), &reg, &TruncationPolicy::default()).unwrap();
        assert_eq!(t.columns, ["G", "Ge", "F", "dim", "deficit"]);
        for row in &t.rows {
            assert!((row.values[1] - row.values[0]).abs() < 1e-8);
            assert!((row.values[2] - 1.0 / row.values[0].sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn failing_points_keep_their_row() {
        let reg = SchemeRegistry::with_builtins();
        let mut p = plan("add");
        p.range = (1.0, 6.0, 3);
        let cramped = TruncationPolicy {
            dim_override: Some(20),
            max_dim: 40,
            ..TruncationPolicy::default()
        };
        let t = run_sweep(&p, &reg, &cramped).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows[0].error.is_none());
        assert!(t.rows[2].error.is_some() && t.rows[2].values[1].is_nan());
        assert!(t.failed_rows() >= 1);
    }

    #[test]
    fn plan_validation() {
        let reg = SchemeRegistry::with_builtins();
        let mut p = plan("sub");
        p.outputs.push(Output::SuccessProbability);
        assert!(p.validate(&reg).is_err());
        p.scheme = "bs-sub".into();
        assert!(p.validate(&reg).is_ok());
        p.range = (2.0, 1.0, 5);
        assert!(p.validate(&reg).is_err());
        let mut q = plan("sub");
        q.var = SweepVar::Phase;
        q.n_phases = Some(16);
        assert!(q.validate(&reg).is_err());
    }

    #[test]
    fn sweeps_are_reproducible() {
        let reg = SchemeRegistry::with_builtins();
        let mut p = plan("coherent");
        p.var = SweepVar::Ratio;
        p.range = (0.0, 1.0, 4);
        p.n_phases = Some(16);
        let a = run_sweep(&p, &reg, &TruncationPolicy::default()).unwrap();
        let b = run_sweep(&p, &reg, &TruncationPolicy::default()).unwrap();
        let bits = |t: &Table| {
            t.rows
                .iter()
                .flat_map(|r| r.values.iter().map(|v| v.to_bits()))
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
    }
}
