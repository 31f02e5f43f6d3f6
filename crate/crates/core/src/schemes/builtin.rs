use num_complex::Complex64 as C64;

use super::{Amplified, AmplifierScheme};
use crate::channels::{
    apply_operation, bs_subtraction, build_operator, ndpa_addition, pila_coherent, Detector, PhotonicOp,
};
use crate::error::{invalid, Error, Result};
use crate::fock::{DensityOperator, HilbertSpec, Ket};
use crate::scissor::{scissor_amplify, ScissorConfig};
use crate::truncation::initial_dim;

fn check_pila_gain(gain: f64) -> Result<()> {
    if !gain.is_finite() || gain < 1.0 {
        return Err(invalid(format!("PILA gain must be finite and ≥ 1, got {gain}")));
    }
    Ok(())
}

fn amplified_input(alpha: C64, gain: f64, spec: HilbertSpec) -> Result<(DensityOperator, f64)> {
    let rho = pila_coherent(alpha, gain, spec)?;
    let (state, trace) = rho.normalize()?;
    Ok((state, (1.0 - trace).max(0.0)))
}

/// The quantum-limited amplifier alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pila {
    pub gain: f64,
}

impl Pila {
    pub fn new(gain: f64) -> Result<Self> {
        check_pila_gain(gain)?;
        Ok(Self { gain })
    }
}

impl AmplifierScheme for Pila {
    fn name(&self) -> String {
        "pila".into()
    }

    fn start_dim(&self, mod_alpha: f64) -> usize {
        initial_dim(self.gain, mod_alpha, 0)
    }

    fn amplify(&self, alpha: C64, spec: HilbertSpec) -> Result<Amplified> {
        let (state, deficit) = amplified_input(alpha, self.gain, spec)?;
        Ok(Amplified {
            state,
            success_probability: None,
            heralding_weight: None,
            deficit,
        })
    }

    fn is_physical(&self) -> bool {
        false
    }

    fn pila_gain(&self) -> Option<f64> {
        Some(self.gain)
    }

    fn tuning_parameter(&self) -> &'static str {
        "G"
    }

    fn tuning(&self) -> f64 {
        self.gain
    }

    fn retuned(&self, value: f64) -> Result<Box<dyn AmplifierScheme>> {
        Ok(Box::new(Self::new(value)?))
    }
}

/// Amplifier followed by an ideal operation `Ô ρ Ô† / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PilaThenOp {
    pub gain: f64,
    pub op: PhotonicOp,
}

impl PilaThenOp {
    pub fn new(gain: f64, op: PhotonicOp) -> Result<Self> {
        check_pila_gain(gain)?;
        op.validate(HilbertSpec::DEFAULT_NUM_TOL)?;
        Ok(Self { gain, op })
    }

    /// Weight of `Ô ρ Ô†` pushed above the cutoff by creation operators.
    fn lost_weight(&self, rho: &DensityOperator) -> f64 {
        let (k, scale) = match self.op {
            PhotonicOp::Subtract(_) => return 0.0,
            PhotonicOp::Add(m) => (m as usize, 1.0),
            PhotonicOp::Coherent { r, .. } => (1, r * r),
        };
        let dim = rho.spec().dim();
        let m = rho.matrix();
        (dim.saturating_sub(k)..dim)
            .map(|n| m[(n, n)].re * (n + 1..=n + k).map(|j| j as f64).product::<f64>())
            .sum::<f64>()
            * scale
    }
}

impl AmplifierScheme for PilaThenOp {
    fn name(&self) -> String {
        self.op.to_string()
    }

    fn start_dim(&self, mod_alpha: f64) -> usize {
        initial_dim(self.gain, mod_alpha, self.op.photon_count())
    }

    fn amplify(&self, alpha: C64, spec: HilbertSpec) -> Result<Amplified> {
        let (rho, deficit) = amplified_input(alpha, self.gain, spec)?;
        let out = apply_operation(&rho, &build_operator(self.op, spec)?)?;
        let lost = self.lost_weight(&rho) / out.weight();
        if lost > spec.trunc_tol() {
            return Err(Error::Truncation {
                dim: spec.dim(),
                leaked: lost,
                tolerance: spec.trunc_tol(),
            });
        }
        let (state, weight) = out.normalize()?;
        Ok(Amplified {
            state,
            success_probability: None,
            heralding_weight: Some(weight),
            deficit: deficit.max(lost),
        })
    }

    fn is_physical(&self) -> bool {
        false
    }

    fn pila_gain(&self) -> Option<f64> {
        Some(self.gain)
    }

    fn tuning_parameter(&self) -> &'static str {
        "G"
    }

    fn tuning(&self) -> f64 {
        self.gain
    }

    fn retuned(&self, value: f64) -> Result<Box<dyn AmplifierScheme>> {
        Ok(Box::new(Self::new(value, self.op)?))
    }
}

/// Amplifier followed by beam-splitter photon subtraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PilaThenBsSubtraction {
    pub gain: f64,
    pub transmittance: f64,
    pub detector: Detector,
}

impl PilaThenBsSubtraction {
    pub fn new(gain: f64, transmittance: f64, detector: Detector) -> Result<Self> {
        check_pila_gain(gain)?;
        if !(transmittance > 0.0 && transmittance < 1.0) {
            return Err(invalid(format!(
                "transmittance must lie in (0, 1), got {transmittance}"
            )));
        }
        Ok(Self {
            gain,
            transmittance,
            detector,
        })
    }
}

impl AmplifierScheme for PilaThenBsSubtraction {
    fn name(&self) -> String {
        match self.detector {
            Detector::OnOff => "bs-sub".into(),
            Detector::FockProjection(m) => format!("bs-sub{m}"),
        }
    }

    fn start_dim(&self, mod_alpha: f64) -> usize {
        initial_dim(self.gain, mod_alpha, 1)
    }

    fn amplify(&self, alpha: C64, spec: HilbertSpec) -> Result<Amplified> {
        let (rho, deficit) = amplified_input(alpha, self.gain, spec)?;
        let h = bs_subtraction(&rho, self.transmittance, self.detector)?;
        Ok(Amplified {
            state: h.state,
            success_probability: Some(h.success_probability),
            heralding_weight: None,
            deficit,
        })
    }

    fn is_physical(&self) -> bool {
        true
    }

    fn pila_gain(&self) -> Option<f64> {
        Some(self.gain)
    }

    fn tuning_parameter(&self) -> &'static str {
        "G"
    }

    fn tuning(&self) -> f64 {
        self.gain
    }

    fn retuned(&self, value: f64) -> Result<Box<dyn AmplifierScheme>> {
        Ok(Box::new(Self::new(value, self.transmittance, self.detector)?))
    }
}

/// Amplifier followed by parametric photon addition heralded on `m` idler photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PilaThenNdpaAddition {
    pub gain: f64,
    pub ndpa_gain: f64,
    pub m: u32,
}

impl PilaThenNdpaAddition {
    pub fn new(gain: f64, ndpa_gain: f64, m: u32) -> Result<Self> {
        check_pila_gain(gain)?;
        if !ndpa_gain.is_finite() || ndpa_gain <= 1.0 {
            return Err(invalid(format!(
                "parametric-amplifier gain must exceed 1, got {ndpa_gain}"
            )));
        }
        if m == 0 {
            return Err(invalid("heralding photon count must be positive"));
        }
        Ok(Self { gain, ndpa_gain, m })
    }
}

impl AmplifierScheme for PilaThenNdpaAddition {
    fn name(&self) -> String {
        format!("ndpa-add{}", self.m)
    }

    fn start_dim(&self, mod_alpha: f64) -> usize {
        initial_dim(self.gain * self.ndpa_gain, mod_alpha, self.m)
    }

    fn amplify(&self, alpha: C64, spec: HilbertSpec) -> Result<Amplified> {
        let (rho, deficit) = amplified_input(alpha, self.gain, spec)?;
        let h = ndpa_addition(&rho, self.ndpa_gain, self.m)?;
        Ok(Amplified {
            state: h.state,
            success_probability: Some(h.success_probability),
            heralding_weight: None,
            deficit,
        })
    }

    fn is_physical(&self) -> bool {
        true
    }

    fn pila_gain(&self) -> Option<f64> {
        Some(self.gain)
    }

    fn tuning_parameter(&self) -> &'static str {
        "G"
    }

    fn tuning(&self) -> f64 {
        self.gain
    }

    fn retuned(&self, value: f64) -> Result<Box<dyn AmplifierScheme>> {
        Ok(Box::new(Self::new(value, self.ndpa_gain, self.m)?))
    }
}

/// N-scissor noiseless amplifier on the bare coherent input.
///
/// `success_probability` sums over all heralding patterns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scissor {
    pub arms: usize,
    pub gain: f64,
}

impl Scissor {
    pub fn new(arms: usize, gain: f64) -> Result<Self> {
        // validates through a throwaway config
        ScissorConfig::new(arms, gain, HilbertSpec::new(2)?)?;
        Ok(Self { arms, gain })
    }
}

impl AmplifierScheme for Scissor {
    fn name(&self) -> String {
        format!("scissor{}", self.arms)
    }

    fn start_dim(&self, mod_alpha: f64) -> usize {
        // no amplifier noise; the fidelity target sits at |gα|
        initial_dim(1.0, mod_alpha * self.gain.max(1.0), self.arms as u32)
    }

    fn amplify(&self, alpha: C64, spec: HilbertSpec) -> Result<Amplified> {
        let cfg = ScissorConfig::new(self.arms, self.gain, spec)?;
        let psi = Ket::coherent(alpha, spec)?;
        let deficit = (1.0 - psi.norm_sqr()).max(0.0);
        let h = scissor_amplify(&psi, &cfg)?;
        Ok(Amplified {
            state: h.state,
            success_probability: Some(h.success_probability),
            heralding_weight: None,
            deficit,
        })
    }

    fn is_physical(&self) -> bool {
        true
    }

    fn pila_gain(&self) -> Option<f64> {
        None
    }

    fn tuning_parameter(&self) -> &'static str {
        "g"
    }

    fn tuning(&self) -> f64 {
        self.gain
    }

    fn retuned(&self, value: f64) -> Result<Box<dyn AmplifierScheme>> {
        Ok(Box::new(Self::new(self.arms, value)?))
    }
}
