use std::collections::BTreeMap;

use super::builtin::{Pila, PilaThenBsSubtraction, PilaThenNdpaAddition, PilaThenOp, Scissor};
use super::AmplifierScheme;
use crate::channels::{Detector, PhotonicOp};
use crate::error::{invalid, Result};

/// Superset of the parameters used by the built-in schemes; each factory
/// reads only the fields it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    /// PILA intensity gain `G`.
    pub gain: f64,
    /// Photons added or subtracted.
    pub m: u32,
    /// Ratio `r` of the coherent operation `t·â + r·â†`.
    pub ratio_r: f64,
    pub transmittance: f64,
    pub detector: Detector,
    pub ndpa_gain: f64,
    /// Number of scissors `N`.
    pub arms: usize,
    /// Per-scissor amplitude gain `g`.
    pub scissor_gain: f64,
}

impl Default for SchemeParams {
    fn default() -> Self {
        Self {
            gain: 1.2,
            m: 1,
            ratio_r: 0.5,
            transmittance: 0.99,
            detector: Detector::OnOff,
            ndpa_gain: 1.01,
            arms: 1,
            scissor_gain: std::f64::consts::SQRT_2,
        }
    }
}

pub type SchemeFactory = Box<dyn Fn(&SchemeParams) -> Result<Box<dyn AmplifierScheme>> + Send + Sync>;

/// Name-keyed scheme constructors.
pub struct SchemeRegistry {
    factories: BTreeMap<String, SchemeFactory>,
}

impl SchemeRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    /// `pila`, `sub`, `add`, `coherent`, `bs-sub`, `ndpa-add` and `scissor`.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register("pila", |p| Ok(Box::new(Pila::new(p.gain)?)));
        reg.register("sub", |p| {
            Ok(Box::new(PilaThenOp::new(p.gain, PhotonicOp::Subtract(p.m))?))
        });
        reg.register("add", |p| Ok(Box::new(PilaThenOp::new(p.gain, PhotonicOp::Add(p.m))?)));
        reg.register("coherent", |p| {
            Ok(Box::new(PilaThenOp::new(p.gain, PhotonicOp::coherent(p.ratio_r)?)?))
        });
        reg.register("bs-sub", |p| {
            Ok(Box::new(PilaThenBsSubtraction::new(
                p.gain,
                p.transmittance,
                p.detector,
            )?))
        });
        reg.register("ndpa-add", |p| {
            Ok(Box::new(PilaThenNdpaAddition::new(p.gain, p.ndpa_gain, p.m)?))
        });
        reg.register("scissor", |p| Ok(Box::new(Scissor::new(p.arms, p.scissor_gain)?)));
        reg
    }

    /// Adds or replaces a factory.
    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&SchemeParams) -> Result<Box<dyn AmplifierScheme>> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Box::new(factory));
    }

    pub fn build(&self, name: &str, params: &SchemeParams) -> Result<Box<dyn AmplifierScheme>> {
        let factory = self.factories.get(name).ok_or_else(|| {
            invalid(format!(
                "unknown scheme '{name}' (available: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })?;
        factory(params)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }
}

impl Default for SchemeRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
