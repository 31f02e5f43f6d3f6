use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::fock::{DensityOperator, FockOperator, HilbertSpec};

/// Ideal heralded operation `Ô` applied after the amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonicOp {
    /// `â^m`
    Subtract(u32),
    /// `(â†)^m`
    Add(u32),
    /// `t·â + r·â†` with real `t² + r² = 1`.
    Coherent { t: f64, r: f64 },
}

impl PhotonicOp {
    /// Coherent superposition with ratio `r ∈ [0, 1]` and `t = √(1 − r²)`.
    pub fn coherent(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(invalid(format!("coherent ratio r must lie in [0, 1], got {r}")));
        }
        Ok(Self::Coherent {
            t: (1.0 - r * r).sqrt(),
            r,
        })
    }

    pub fn validate(&self, num_tol: f64) -> Result<()> {
        match *self {
            Self::Subtract(0) | Self::Add(0) => Err(invalid("photon count m must be positive")),
            Self::Coherent { t, r } => {
                if !t.is_finite() || !r.is_finite() || (t * t + r * r - 1.0).abs() > num_tol {
                    Err(invalid(format!(
                        "coherent operation needs t² + r² = 1, got t={t}, r={r}"
                    )))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Photons added or removed (1 for the coherent superposition).
    pub fn photon_count(&self) -> u32 {
        match *self {
            Self::Subtract(m) | Self::Add(m) => m,
            Self::Coherent { .. } => 1,
        }
    }

    /// Whether `Ô` commutes with phase rotations up to a phase factor.
    pub fn is_phase_covariant(&self) -> bool {
        match *self {
            Self::Subtract(_) | Self::Add(_) => true,
            Self::Coherent { t, r } => t == 0.0 || r == 0.0,
        }
    }
}

impl fmt::Display for PhotonicOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Subtract(m) => write!(f, "sub{m}"),
            Self::Add(m) => write!(f, "add{m}"),
            Self::Coherent { r, .. } => write!(f, "coh{r}"),
        }
    }
}

/// Parses `sub<m>`, `add<m>` and `coh<r>` (e.g. `sub2`, `add1`, `coh0.5`).
impl FromStr for PhotonicOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_m = |rest: &str| -> Result<u32> {
            let m: u32 = rest
                .parse()
                .map_err(|_| invalid(format!("bad photon count in operation '{s}'")))?;
            if m == 0 {
                return Err(invalid("photon count m must be positive"));
            }
            Ok(m)
        };
        if let Some(rest) = s.strip_prefix("sub") {
            Ok(Self::Subtract(parse_m(rest)?))
        } else if let Some(rest) = s.strip_prefix("add") {
            Ok(Self::Add(parse_m(rest)?))
        } else if let Some(rest) = s.strip_prefix("coh") {
            let r: f64 = rest
                .parse()
                .map_err(|_| invalid(format!("bad ratio in operation '{s}'")))?;
            Self::coherent(r)
        } else {
            Err(invalid(format!(
                "unknown operation '{s}' (expected sub<m>, add<m> or coh<r>)"
            )))
        }
    }
}

/// Matrix of `â^m`, `(â†)^m` or `t·â + r·â†`.
pub fn build_operator(op: PhotonicOp, spec: HilbertSpec) -> Result<FockOperator> {
    op.validate(spec.num_tol())?;
    let a = FockOperator::annihilation(spec);
    Ok(match op {
        PhotonicOp::Subtract(m) => a.pow(m),
        PhotonicOp::Add(m) => a.adjoint().pow(m),
        PhotonicOp::Coherent { t, r } => &a.scale(t.into()) + &a.adjoint().scale(r.into()),
    })
}

/// `Ô ρ Ô†` with weight `N = Tr(Ô ρ Ô†)`; normalize with
/// [`DensityOperator::normalize`].
pub fn apply_operation(rho: &DensityOperator, op: &FockOperator) -> Result<DensityOperator> {
    rho.require_normalized("apply_operation")?;
    let out = rho.conjugated_by(op)?;
    if out.weight() <= rho.spec().num_tol() {
        return Err(Error::ZeroTrace { trace: out.weight() });
    }
    Ok(out)
}
