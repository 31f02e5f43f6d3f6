use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::pila::check_gain;
use crate::error::{invalid, Error, Result};
use crate::fock::special::{beam_splitter_amplitude, ln_factorials, squeezer_amplitude};
use crate::fock::DensityOperator;

/// Detector on the auxiliary mode that heralds success.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detector {
    /// Projects onto `I − |0⟩⟨0|` (any click).
    OnOff,
    /// Projects onto `|m⟩`.
    FockProjection(u32),
}

/// Normalized conditional state plus the probability of the heralding event.
#[derive(Debug, Clone, PartialEq)]
pub struct Heralded {
    pub state: DensityOperator,
    pub success_probability: f64,
}

impl Heralded {
    pub(crate) fn from_branch(branch: DensityOperator) -> Result<Self> {
        let (state, success_probability) = branch.normalize()?;
        Ok(Self {
            state,
            success_probability,
        })
    }
}

/// Photon subtraction by tapping the input on a beam splitter of transmittance
/// `T` (ancilla in vacuum) and detecting photons in the reflected port.
///
/// Detecting `k` photons applies `B_k|n⟩ = ⟨n−k, k|U_BS|n, 0⟩ |n−k⟩`.
pub fn bs_subtraction(rho: &DensityOperator, transmittance: f64, detector: Detector) -> Result<Heralded> {
    if !(transmittance > 0.0 && transmittance < 1.0) {
        return Err(invalid(format!(
            "transmittance must lie in (0, 1), got {transmittance}"
        )));
    }
    rho.require_normalized("bs_subtraction")?;
    let spec = rho.spec();
    let dim = spec.dim();
    let (t, r) = (transmittance.sqrt(), (1.0 - transmittance).sqrt());
    let clicks: Vec<usize> = match detector {
        Detector::OnOff => (1..dim).collect(),
        Detector::FockProjection(0) => return Err(invalid("heralding photon count must be positive")),
        Detector::FockProjection(m) => vec![m as usize],
    };
    let input = rho.matrix();
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    let mut amp = vec![0.0; dim];
    for k in clicks.into_iter().filter(|&k| k < dim) {
        for (i, a) in amp.iter_mut().enumerate().take(dim - k) {
            *a = beam_splitter_amplitude(t, r, i + k, 0, i);
        }
        for j in 0..dim - k {
            for i in 0..dim - k {
                out[(i, j)] += input[(i + k, j + k)] * (amp[i] * amp[j]);
            }
        }
    }
    let branch = DensityOperator::from_parts(out, spec);
    if branch.trace() <= spec.num_tol() {
        return Err(Error::ZeroTrace { trace: branch.trace() });
    }
    Heralded::from_branch(branch)
}

/// Photon addition by a nondegenerate parametric amplifier of gain
/// `cosh²ξ = G` (idler in vacuum) heralded by `m` idler photons.
///
/// The idler projection applies `K_m|n⟩ = cosh^{−(n+1)}ξ √C(n+m, m) tanh^m ξ |n+m⟩`.
pub fn ndpa_addition(rho: &DensityOperator, gain: f64, m: u32) -> Result<Heralded> {
    check_gain(gain)?;
    if gain == 1.0 {
        return Err(invalid("parametric-amplifier gain must exceed 1"));
    }
    if m == 0 {
        return Err(invalid("heralding photon count must be positive"));
    }
    rho.require_normalized("ndpa_addition")?;
    let spec = rho.spec();
    let dim = spec.dim();
    let m = m as usize;
    let ln_fact = ln_factorials(dim + m);
    let amp: Vec<f64> = (0..dim).map(|n| squeezer_amplitude(&ln_fact, gain, n, m)).collect();
    let input = rho.matrix();
    // inputs that would land beyond the cutoff
    let leaked: f64 = (dim.saturating_sub(m)..dim)
        .map(|n| input[(n, n)].re * amp[n] * amp[n])
        .sum();
    if leaked > spec.trunc_tol() {
        return Err(Error::Truncation {
            dim,
            leaked,
            tolerance: spec.trunc_tol(),
        });
    }
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    for j in 0..dim.saturating_sub(m) {
        for i in 0..dim - m {
            out[(i + m, j + m)] = input[(i, j)] * (amp[i] * amp[j]);
        }
    }
    let branch = DensityOperator::from_parts(out, spec);
    if branch.trace() <= spec.num_tol() {
        return Err(Error::ZeroTrace { trace: branch.trace() });
    }
    Heralded::from_branch(branch)
}
