use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::metrics::evaluate;
use crate::schemes::AmplifierScheme;
use crate::truncation::TruncationPolicy;

pub const MAX_BISECTIONS: usize = 60;

/// Accepted distance between the achieved and the requested effective gain.
const GAIN_TOLERANCE: f64 = 1e-6;

/// Outcome of [`calibrate_gain`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    /// Tuning parameter (`G` or `g`) that hits the target.
    pub value: f64,
    pub effective_gain: f64,
    pub iterations: usize,
}

/// Bisects `scheme`'s tuning parameter on `bounds` until the measured effective
/// gain at input `alpha` equals `target`.
pub fn calibrate_gain(
    scheme: &dyn AmplifierScheme,
    alpha: C64,
    target: f64,
    bounds: (f64, f64),
    policy: &TruncationPolicy,
) -> Result<Calibration> {
    let (mut lo, mut hi) = bounds;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(invalid(format!(
            "calibration bounds must satisfy lo < hi, got ({lo}, {hi})"
        )));
    }
    if !target.is_finite() || target <= 0.0 {
        return Err(invalid(format!("target effective gain must be positive, got {target}")));
    }
    let gain_at = |x: f64| -> Result<f64> {
        Ok(evaluate(scheme.retuned(x)?.as_ref(), alpha, policy)?
            .report
            .effective_gain)
    };
    let (g_lo, g_hi) = (gain_at(lo)?, gain_at(hi)?);
    let (f_lo, f_hi) = (g_lo - target, g_hi - target);
    if f_lo == 0.0 {
        return Ok(Calibration {
            value: lo,
            effective_gain: g_lo,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Calibration {
            value: hi,
            effective_gain: g_hi,
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket {
            target,
            low: g_lo.min(g_hi),
            high: g_lo.max(g_hi),
        });
    }
    let rising = f_hi > 0.0;
    let mut best = (lo, g_lo);
    for it in 1..=MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let g = gain_at(mid)?;
        best = (mid, g);
        let f = g - target;
        if f.abs() <= 1e-3 * GAIN_TOLERANCE || mid == lo || mid == hi {
            return finish(best, target, it);
        }
        if (f > 0.0) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    finish(best, target, MAX_BISECTIONS)
}

fn finish((value, effective_gain): (f64, f64), target: f64, iterations: usize) -> Result<Calibration> {
    if (effective_gain - target).abs() > GAIN_TOLERANCE {
        return Err(invalid(format!(
            "bisection stalled at {value} with effective gain {effective_gain} (target {target})"
        )));
    }
    Ok(Calibration {
        value,
        effective_gain,
        iterations,
    })
}
