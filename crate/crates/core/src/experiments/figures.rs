//! Datasets behind each figure, one [`Table`] per figure panel.

use std::time::Instant;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::calibrate::calibrate_gain;
use super::sweep::Output;
use super::table::{Row, Table};
use crate::channels::{Detector, PhotonicOp};
use crate::error::{invalid, Error, Result};
use crate::metrics::{
    average, evaluate, fidelity_to_target, phase_evaluations, wigner, Evaluation, PhaseMetric, WignerGrid,
};
use crate::schemes::{AmplifierScheme, Pila, PilaThenBsSubtraction, PilaThenOp, Scissor};
use crate::truncation::TruncationPolicy;

/// The four operations compared throughout: `â`, `â²`, `â†`, `â†²`.
pub const OPERATIONS: [PhotonicOp; 4] = [
    PhotonicOp::Subtract(1),
    PhotonicOp::Subtract(2),
    PhotonicOp::Add(1),
    PhotonicOp::Add(2),
];

/// Builds one row while tracking cutoff provenance and per-cell failures.
struct RowBuilder {
    start: Instant,
    values: Vec<f64>,
    dim: usize,
    deficit: f64,
    errors: Vec<String>,
}

impl RowBuilder {
    fn new(x: f64) -> Self {
        Self {
            start: Instant::now(),
            values: vec![x],
            dim: 0,
            deficit: 0.0,
            errors: Vec::new(),
        }
    }

    fn track(&mut self, e: &Evaluation) {
        self.dim = self.dim.max(e.spec.dim());
        self.deficit = self.deficit.max(e.deficit);
    }

    /// Pushes `value` or, on failure, NaN and a labelled error.
    fn push(&mut self, label: &str, value: Result<f64>) {
        match value {
            Ok(v) => self.values.push(v),
            Err(e) => {
                self.values.push(f64::NAN);
                self.errors.push(format!("{label}: {e}"));
            }
        }
    }

    fn finish(mut self) -> Row {
        self.values.push(if self.dim == 0 { f64::NAN } else { self.dim as f64 });
        self.values.push(self.deficit);
        Row {
            values: self.values,
            elapsed: self.start.elapsed(),
            error: (!self.errors.is_empty()).then(|| self.errors.join("; ")),
        }
    }
}

fn with_provenance(mut columns: Vec<String>) -> Vec<String> {
    columns.extend(["dim".to_string(), "deficit".to_string()]);
    columns
}

fn pick(output: Output, e: &Evaluation) -> f64 {
    let r = &e.report;
    match output {
        Output::EffectiveGain => r.effective_gain,
        Output::Fidelity => r.fidelity,
        Output::Holevo => r.holevo_variance,
        Output::SuccessProbability => r.success_probability.unwrap_or(f64::NAN),
    }
}

/// One metric versus PILA gain for `â`, `â²`, `â†`, `â†²` (and the PILA alone
/// when `with_pila`). Columns `G, <m>_sub1, <m>_sub2, <m>_add1, <m>_add2[, <m>_pila]`.
pub fn gain_sweep(
    output: Output,
    alpha_mod: f64,
    gains: &[f64],
    with_pila: bool,
    policy: &TruncationPolicy,
) -> Result<Table> {
    if !alpha_mod.is_finite() || alpha_mod <= 0.0 {
        return Err(invalid(format!("|α| must be finite and positive, got {alpha_mod}")));
    }
    let prefix = output.column();
    let mut columns = vec!["G".to_string()];
    columns.extend(OPERATIONS.iter().map(|op| format!("{prefix}_{op}")));
    if with_pila {
        columns.push(format!("{prefix}_pila"));
    }
    let alpha = C64::new(alpha_mod, 0.0);
    let rows = gains
        .par_iter()
        .map(|&gain| {
            let mut row = RowBuilder::new(gain);
            let mut schemes: Vec<(String, Result<Box<dyn AmplifierScheme>>)> = OPERATIONS
                .iter()
                .map(|&op| {
                    (
                        op.to_string(),
                        PilaThenOp::new(gain, op).map(|s| Box::new(s) as Box<dyn AmplifierScheme>),
                    )
                })
                .collect();
            if with_pila {
                schemes.push((
                    "pila".into(),
                    Pila::new(gain).map(|s| Box::new(s) as Box<dyn AmplifierScheme>),
                ));
            }
            for (label, scheme) in schemes {
                let value = scheme.and_then(|s| evaluate(s.as_ref(), alpha, policy)).map(|e| {
                    row.track(&e);
                    pick(output, &e)
                });
                row.push(&label, value);
            }
            row.finish()
        })
        .collect();
    Ok(Table {
        columns: with_provenance(columns),
        rows,
    })
}

/// Fidelity versus effective gain for `â`, `â²` and the PILA alone, each
/// calibrated to the target `G_e`. Columns `Ge, F_sub1, F_sub2, F_pila, G_sub1, G_sub2`.
pub fn fidelity_at_effective_gain(
    alpha_mod: f64,
    targets: &[f64],
    gain_bounds: (f64, f64),
    policy: &TruncationPolicy,
) -> Result<Table> {
    let alpha = C64::new(alpha_mod, 0.0);
    let columns = ["Ge", "F_sub1", "F_sub2", "F_pila", "G_sub1", "G_sub2"]
        .map(String::from)
        .to_vec();
    let rows = targets
        .par_iter()
        .map(|&target| {
            let mut row = RowBuilder::new(target);
            let mut gains = Vec::new();
            for op in [PhotonicOp::Subtract(1), PhotonicOp::Subtract(2)] {
                let point = PilaThenOp::new(gain_bounds.0, op)
                    .and_then(|s| calibrate_gain(&s, alpha, target, gain_bounds, policy))
                    .and_then(|c| Ok((c.value, evaluate(&PilaThenOp::new(c.value, op)?, alpha, policy)?)));
                gains.push(point.as_ref().map_or(f64::NAN, |(g, _)| *g));
                let f = point.map(|(_, e)| {
                    row.track(&e);
                    e.report.fidelity
                });
                row.push(&op.to_string(), f);
            }
            // G_e = G for the PILA alone
            let pila = Pila::new(target).and_then(|s| evaluate(&s, alpha, policy)).map(|e| {
                row.track(&e);
                e.report.fidelity
            });
            row.push("pila", pila);
            row.values.extend(gains);
            row.finish()
        })
        .collect();
    Ok(Table {
        columns: with_provenance(columns),
        rows,
    })
}

/// Phase-averaged metrics of `t·â + r·â†` versus `r`, with the `â` and `â†`
/// values repeated as reference columns.
pub fn ratio_sweep(
    metrics: &[PhaseMetric],
    alpha_mod: f64,
    gain: f64,
    ratios: &[f64],
    n_phases: usize,
    policy: &TruncationPolicy,
) -> Result<Table> {
    let name = |m: PhaseMetric| match m {
        PhaseMetric::Gain => ("Ge_avg", Output::EffectiveGain),
        PhaseMetric::MeanGain => ("Ge_mean", Output::EffectiveGain),
        PhaseMetric::Fidelity => ("F_avg", Output::Fidelity),
        PhaseMetric::Holevo => ("V_avg", Output::Holevo),
    };
    let mut references: Vec<Output> = metrics.iter().map(|&m| name(m).1).collect();
    references.dedup();
    let mut columns = vec!["r".to_string()];
    columns.extend(metrics.iter().map(|&m| name(m).0.to_string()));
    for o in &references {
        columns.push(format!("{}_sub1", o.column()));
        columns.push(format!("{}_add1", o.column()));
    }
    let alpha = C64::new(alpha_mod, 0.0);
    let sub = evaluate(&PilaThenOp::new(gain, PhotonicOp::Subtract(1))?, alpha, policy)?;
    let add = evaluate(&PilaThenOp::new(gain, PhotonicOp::Add(1))?, alpha, policy)?;
    // phases run in parallel inside each point
    let rows = ratios
        .iter()
        .map(|&r| {
            let mut row = RowBuilder::new(r);
            let evals = PhotonicOp::coherent(r)
                .and_then(|op| PilaThenOp::new(gain, op))
                .and_then(|s| phase_evaluations(&s, alpha_mod, n_phases, policy));
            match evals {
                Ok(evals) => {
                    evals.iter().for_each(|e| row.track(e));
                    let reports: Vec<_> = evals.into_iter().map(|e| e.report).collect();
                    for &m in metrics {
                        row.values.push(average(m, &reports));
                    }
                }
                Err(e) => {
                    for &m in metrics {
                        row.push(name(m).0, Err(e.clone()));
                    }
                }
            }
            for &o in &references {
                row.values.push(pick(o, &sub));
                row.values.push(pick(o, &add));
            }
            row.finish()
        })
        .collect();
    Ok(Table {
        columns: with_provenance(columns),
        rows,
    })
}

/// Parameters of the scissor versus subtraction comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScissorComparison {
    pub alpha_mod: f64,
    pub max_arms: usize,
    pub target_gain: f64,
    pub transmittance: f64,
    /// PILA gain bracket for calibrating the subtraction scheme.
    pub gain_bounds: (f64, f64),
    /// Scissor gain bracket for the calibrated columns.
    pub scissor_bounds: (f64, f64),
}

impl Default for ScissorComparison {
    fn default() -> Self {
        Self {
            alpha_mod: 0.2,
            max_arms: 4,
            target_gain: 2.0,
            transmittance: 0.99,
            gain_bounds: (1.0, 10.0),
            scissor_bounds: (1.0, 3.0),
        }
    }
}

/// Scissor network versus PILA + beam-splitter subtraction at a target effective gain.
///
/// One row per `N`. The `_nominal` scissor columns use `g = √G_e` and measure
/// fidelity against `|√G_e α⟩`; the `_cal` columns bisect `g` so that the
/// measured effective gain hits the target (NaN, without a row error, where
/// the target lies outside the scissor's reachable range).
/// `Ps_*` is the single-pattern probability, `Ps_*_all` sums the 2^N patterns.
/// The subtraction scheme is calibrated once and repeated on every row.
pub fn scissor_comparison(cfg: &ScissorComparison, policy: &TruncationPolicy) -> Result<Table> {
    if cfg.max_arms == 0 {
        return Err(invalid("need at least one scissor"));
    }
    let alpha = C64::new(cfg.alpha_mod, 0.0);
    let target = cfg.target_gain;
    let columns = [
        "N",
        "g_nominal",
        "Ge_nominal",
        "F_nominal",
        "Ps_nominal",
        "Ps_nominal_all",
        "g_cal",
        "F_cal",
        "Ps_cal",
        "Ps_cal_all",
        "G_sub",
        "F_sub",
        "Ps_sub",
    ]
    .map(String::from)
    .to_vec();

    let probe = PilaThenBsSubtraction::new(cfg.gain_bounds.0, cfg.transmittance, Detector::OnOff)?;
    let sub = calibrate_gain(&probe, alpha, target, cfg.gain_bounds, policy).and_then(|c| {
        let e = evaluate(probe.retuned(c.value)?.as_ref(), alpha, policy)?;
        Ok((c.value, e))
    });

    let rows = (1..=cfg.max_arms)
        .into_par_iter()
        .map(|arms| {
            let mut row = RowBuilder::new(arms as f64);
            let multiplicity = 2f64.powi(arms as i32);
            let g = target.sqrt();
            row.values.push(g);
            let nominal = Scissor::new(arms, g).and_then(|s| {
                let (out, spec) = policy.run(s.start_dim(cfg.alpha_mod), |spec| {
                    let out = s.amplify(alpha, spec)?;
                    let f = fidelity_to_target(&out.state, alpha, target)?;
                    let ge = crate::metrics::effective_gain(&out.state, alpha)?;
                    Ok((ge, f, out.success_probability.unwrap_or(f64::NAN)))
                })?;
                row.dim = row.dim.max(spec.dim());
                Ok(out)
            });
            match nominal {
                Ok((ge, f, ps)) => row.values.extend([ge, f, ps / multiplicity, ps]),
                Err(e) => {
                    row.values.extend([f64::NAN; 4]);
                    row.errors.push(format!("scissor{arms} nominal: {e}"));
                }
            }
            let calibrated = Scissor::new(arms, g).and_then(|s| {
                let c = calibrate_gain(&s, alpha, target, cfg.scissor_bounds, policy)?;
                let e = evaluate(&Scissor::new(arms, c.value)?, alpha, policy)?;
                Ok((c.value, e))
            });
            match calibrated {
                Ok((g_cal, e)) => {
                    row.track(&e);
                    let ps = e.report.success_probability.unwrap_or(f64::NAN);
                    row.values.extend([g_cal, e.report.fidelity, ps / multiplicity, ps]);
                }
                // an unreachable target is a result, not a failure
                Err(Error::NoBracket { .. }) => row.values.extend([f64::NAN; 4]),
                Err(e) => {
                    row.values.extend([f64::NAN; 4]);
                    row.errors.push(format!("scissor{arms} calibrated: {e}"));
                }
            }
            match &sub {
                Ok((gain, e)) => {
                    row.track(e);
                    row.values.extend([
                        *gain,
                        e.report.fidelity,
                        e.report.success_probability.unwrap_or(f64::NAN),
                    ]);
                }
                Err(e) => {
                    row.values.extend([f64::NAN; 3]);
                    row.errors.push(format!("subtraction: {e}"));
                }
            }
            row.finish()
        })
        .collect();
    Ok(Table {
        columns: with_provenance(columns),
        rows,
    })
}

/// Wigner function of `scheme`'s output on `grid`. Columns `x, p, W`.
pub fn wigner_table(
    scheme: &dyn AmplifierScheme,
    alpha: C64,
    grid: &WignerGrid,
    policy: &TruncationPolicy,
) -> Result<Table> {
    grid.validate()?;
    let start = Instant::now();
    let (out, _) = policy.run(scheme.start_dim(alpha.norm()), |spec| scheme.amplify(alpha, spec))?;
    let points = grid.points();
    let values = wigner(&out.state, &points)?;
    let per_point = start.elapsed() / points.len().max(1) as u32;
    let rows = points
        .iter()
        .zip(values)
        .map(|(b, w)| Row {
            values: vec![b.re, b.im, w],
            elapsed: per_point,
            error: None,
        })
        .collect();
    Ok(Table {
        columns: vec!["x".into(), "p".into(), "W".into()],
        rows,
    })
}
