use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::fock::special::{ln_factorials, squeezer_amplitude};
use crate::fock::{DensityOperator, FockOperator, HilbertSpec, Ket};

pub(crate) fn check_gain(gain: f64) -> Result<()> {
    if !gain.is_finite() || gain < 1.0 {
        return Err(invalid(format!("amplifier gain must be finite and ≥ 1, got {gain}")));
    }
    Ok(())
}

/// Amplified coherent state: the displaced thermal state
/// `D(√G α) ρ_th(G−1) D†(√G α)`, exactly `|α⟩⟨α|` at `G = 1`.
pub fn pila_coherent(alpha: C64, gain: f64, spec: HilbertSpec) -> Result<DensityOperator> {
    check_gain(gain)?;
    if gain == 1.0 {
        return Ok(Ket::coherent(alpha, spec)?.projector());
    }
    let thermal = DensityOperator::thermal(gain - 1.0, spec)?;
    let d = FockOperator::displacement(alpha * gain.sqrt(), spec);
    // D·diag(p)·D† without the dense middle factor
    let mut scaled = d.matrix().clone();
    for (mut col, p) in scaled.column_iter_mut().zip(thermal.matrix().diagonal().iter()) {
        col *= *p;
    }
    let m = &scaled * d.matrix().adjoint();
    let out = DensityOperator::from_parts(hermitian_part(m), spec);
    let leaked = 1.0 - out.trace();
    if leaked > spec.trunc_tol() {
        return Err(Error::Truncation {
            dim: spec.dim(),
            leaked,
            tolerance: spec.trunc_tol(),
        });
    }
    Ok(out)
}

/// Quantum-limited phase-insensitive amplifier acting on an arbitrary state.
///
/// The input is embedded with an idler vacuum, the two-mode squeezer with
/// `cosh²ξ = G` acts through its closed form on `|n, 0⟩`, and the idler is
/// traced out. The partial trace is carried out idler photon by idler photon,
/// i.e. as the Kraus sum `Σ_k K_k ρ K_k†` with
/// `K_k|n⟩ = cosh^{−(n+1)}ξ √C(n+k,k) tanh^k ξ |n+k⟩`.
pub fn pila_channel(rho: &DensityOperator, gain: f64) -> Result<DensityOperator> {
    check_gain(gain)?;
    rho.require_normalized("pila_channel")?;
    if gain == 1.0 {
        return Ok(rho.clone());
    }
    let spec = rho.spec();
    let dim = spec.dim();
    let ln_fact = ln_factorials(2 * dim);
    let input = rho.matrix();
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    let mut amp = vec![0.0; dim];
    for k in 0..dim {
        for (n, a) in amp.iter_mut().enumerate().take(dim - k) {
            *a = squeezer_amplitude(&ln_fact, gain, n, k);
        }
        for j in 0..dim - k {
            for i in 0..dim - k {
                out[(i + k, j + k)] += input[(i, j)] * (amp[i] * amp[j]);
            }
        }
    }
    let out = DensityOperator::from_parts(hermitian_part(out), spec);
    let leaked = rho.trace() - out.trace();
    if leaked > spec.trunc_tol() {
        return Err(Error::Truncation {
            dim,
            leaked,
            tolerance: spec.trunc_tol(),
        });
    }
    Ok(out)
}

fn hermitian_part(m: DMatrix<C64>) -> DMatrix<C64> {
    let adj = m.adjoint();
    (m + adj).scale(0.5)
}
