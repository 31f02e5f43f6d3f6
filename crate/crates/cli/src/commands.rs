use std::str::FromStr;

use noisy_amp::channels::{Detector, PhotonicOp};
use noisy_amp::experiments::figures::{self, ScissorComparison};
use noisy_amp::experiments::{linspace, run_sweep, Output, SweepPlan, SweepVar, Table};
use noisy_amp::metrics::{PhaseMetric, WignerGrid};
use noisy_amp::schemes::{AmplifierScheme, Pila, PilaThenOp, SchemeParams, SchemeRegistry};
use noisy_amp::{Complex64, Error, TruncationPolicy};

use crate::config::{config_error, key, ConfigError, Key, Params};

/// A subcommand: its name, description and parameters with defaults.
pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [Key],
}

const GAIN_AXIS: [Key; 4] = [
    key("alpha_mod", "0.2", "input amplitude |α|"),
    key("g_min", "1.0", "smallest PILA gain G"),
    key("g_max", "2.5", "largest PILA gain G"),
    key("g_steps", "31", "number of gain values"),
];

const RATIO_AXIS: [Key; 4] = [
    key("alpha_mod", "0.2", "input amplitude |α|"),
    key("g", "1.2", "PILA gain G"),
    key("r_steps", "21", "number of ratios r in [0, 1]"),
    key("n_phases", "256", "input phases averaged over [0, 2π)"),
];

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec {
        name: "fig1",
        about: "Effective gain G_e versus PILA gain G after a, a², a†, a†² (|α| = 0.2).",
        keys: &GAIN_AXIS,
    },
    CommandSpec {
        name: "fig2",
        about: "Phase-averaged effective gain of t·a + r·a† versus r (|α| = 0.2, G = 1.2). \
                Ge_avg averages the amplitude ratio, Ge_mean averages G_e itself.",
        keys: &RATIO_AXIS,
    },
    CommandSpec {
        name: "fig3a",
        about: "Fidelity F versus PILA gain G after a, a², a†, a†² (|α| = 0.2).",
        keys: &GAIN_AXIS,
    },
    CommandSpec {
        name: "fig3b",
        about: "Fidelity F versus effective gain G_e for a, a² and the PILA alone (|α| = 0.2); \
                each point calibrates G by bisection.",
        keys: &[
            key("alpha_mod", "0.2", "input amplitude |α|"),
            key("ge_min", "1.05", "smallest effective gain"),
            key("ge_max", "4.0", "largest effective gain"),
            key("ge_steps", "30", "number of effective-gain values"),
            key("g_bound", "10.0", "upper end of the PILA gain bracket"),
        ],
    },
    CommandSpec {
        name: "fig4",
        about: "N-scissor amplifier versus PILA + beam-splitter subtraction with an on-off detector \
                at G_e = 2 (transmittance 0.99, |α| = 0.2; use --alpha-mod 1.0 for the strong input).",
        keys: &[
            key("alpha_mod", "0.2", "input amplitude |α|"),
            key("n_max", "4", "largest number of scissors N"),
            key("target_ge", "2.0", "effective gain to reach"),
            key("transmittance", "0.99", "beam-splitter transmittance T"),
            key("g_bound", "10.0", "upper end of the PILA gain bracket"),
            key("scissor_bound", "3.0", "upper end of the scissor gain bracket"),
        ],
    },
    CommandSpec {
        name: "fig7",
        about: "Phase-averaged fidelity of t·a + r·a† versus r (|α| = 0.2, G = 1.2).",
        keys: &RATIO_AXIS,
    },
    CommandSpec {
        name: "fig8",
        about: "Holevo phase variance V versus PILA gain G after a, a², a†, a†² and for the PILA alone (|α| = 0.2).",
        keys: &GAIN_AXIS,
    },
    CommandSpec {
        name: "fig9",
        about: "Phase-averaged Holevo variance of t·a + r·a† versus r (|α| = 0.2, G = 1.2).",
        keys: &RATIO_AXIS,
    },
    CommandSpec {
        name: "wigner",
        about: "Wigner function of the output state on a grid (G = 1.2, |α| = 0.2). \
                op is sub<m>, add<m>, coh<r> or pila; coh0.7071067811865476 is the balanced superposition.",
        keys: &[
            key("op", "add1", "operation after the PILA"),
            key("g", "1.2", "PILA gain G"),
            key("alpha_mod", "0.2", "input amplitude |α|"),
            key("phi", "0", "input phase φ"),
            key("x_min", "-3", "grid lower bound in x"),
            key("x_max", "3", "grid upper bound in x"),
            key("p_min", "-3", "grid lower bound in p"),
            key("p_max", "3", "grid upper bound in p"),
            key("step", "0.05", "grid spacing"),
        ],
    },
    CommandSpec {
        name: "custom",
        about: "Sweep any registered scheme along one parameter.",
        keys: &[
            key(
                "scheme",
                "sub",
                "scheme name (pila, sub, add, coherent, bs-sub, ndpa-add, scissor)",
            ),
            key("sweep", "G", "swept parameter: G, r, T, g, alpha_mod or phi"),
            key("lo", "1.0", "first value of the swept parameter"),
            key("hi", "2.5", "last value of the swept parameter"),
            key("steps", "16", "number of points"),
            key("outputs", "Ge,F,V", "comma-separated columns from Ge, F, V, Ps"),
            key("alpha_mod", "0.2", "input amplitude |α|"),
            key("phi", "0", "input phase φ"),
            key("g", "1.2", "PILA gain G"),
            key("m", "1", "photons added or subtracted"),
            key("r", "0.5", "ratio r of t·a + r·a†"),
            key("transmittance", "0.99", "beam-splitter transmittance T"),
            key("detector", "onoff", "onoff or fock<m>"),
            key("ndpa_gain", "1.01", "parametric-amplifier gain for ndpa-add"),
            key("arms", "1", "number of scissors N"),
            key("scissor_gain", "1.4142135623730951", "per-scissor amplitude gain g"),
            key("n_phases", "0", "average over this many input phases (0 = off)"),
        ],
    },
];

pub fn find(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}

/// Why a run failed: bad configuration (exit 2) or numerics (exit 3).
#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numeric(Error),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        Self::Config(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(msg) => Self::Config(ConfigError(msg)),
            other => Self::Numeric(other),
        }
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), ConfigError> {
    if cond {
        Ok(())
    } else {
        Err(config_error(msg()))
    }
}

pub fn policy(params: &Params) -> Result<TruncationPolicy, ConfigError> {
    let mut policy = TruncationPolicy {
        trunc_tol: params.f64("trunc_tol")?,
        num_tol: params.f64("num_tol")?,
        ..TruncationPolicy::default()
    };
    require(policy.trunc_tol >= 0.0 && policy.num_tol >= 0.0, || {
        "tolerances must be non-negative".into()
    })?;
    if params.str("dim") != "auto" {
        let dim = params.usize("dim")?;
        require(dim >= 2, || format!("dim must be at least 2, got {dim}"))?;
        policy.dim_override = Some(dim);
        policy.max_dim = policy.max_dim.max(dim);
    }
    Ok(policy)
}

fn positive(params: &Params, key: &str) -> Result<f64, ConfigError> {
    let v = params.f64(key)?;
    require(v > 0.0, || format!("{key} must be positive, got {v}"))?;
    Ok(v)
}

fn pila_gain(params: &Params, key: &str) -> Result<f64, ConfigError> {
    let v = params.f64(key)?;
    require(v >= 1.0, || format!("{key} must be at least 1, got {v}"))?;
    Ok(v)
}

fn steps(params: &Params, key: &str) -> Result<usize, ConfigError> {
    let n = params.usize(key)?;
    require(n >= 2, || format!("{key} must be at least 2, got {n}"))?;
    Ok(n)
}

fn range(params: &Params, lo: &str, hi: &str) -> Result<(f64, f64), ConfigError> {
    let (a, b) = (params.f64(lo)?, params.f64(hi)?);
    require(a < b, || format!("{lo} must be below {hi}, got {a} ≥ {b}"))?;
    Ok((a, b))
}

fn phases(params: &Params) -> Result<usize, ConfigError> {
    let n = params.usize("n_phases")?;
    require(n >= 8, || format!("n_phases must be at least 8, got {n}"))?;
    Ok(n)
}

fn parse_detector(s: &str) -> Result<Detector, ConfigError> {
    if s == "onoff" {
        return Ok(Detector::OnOff);
    }
    s.strip_prefix("fock")
        .and_then(|m| m.parse::<u32>().ok())
        .filter(|&m| m > 0)
        .map(Detector::FockProjection)
        .ok_or_else(|| config_error(format!("detector: expected onoff or fock<m>, got '{s}'")))
}

fn wigner_scheme(op: &str, gain: f64) -> Result<Box<dyn AmplifierScheme>, RunError> {
    if op == "pila" {
        return Ok(Box::new(Pila::new(gain)?));
    }
    let op = PhotonicOp::from_str(op).map_err(|e| config_error(format!("op: {e}")))?;
    Ok(Box::new(PilaThenOp::new(gain, op)?))
}

/// Validates every parameter, then computes the command's table.
pub fn run(spec: &CommandSpec, params: &Params) -> Result<Table, RunError> {
    let policy = policy(params)?;
    let table = match spec.name {
        "fig1" | "fig3a" | "fig8" => {
            let alpha = positive(params, "alpha_mod")?;
            let (lo, hi) = range(params, "g_min", "g_max")?;
            pila_gain(params, "g_min")?;
            let gains = linspace(lo, hi, steps(params, "g_steps")?);
            let (output, with_pila) = match spec.name {
                "fig1" => (Output::EffectiveGain, false),
                "fig3a" => (Output::Fidelity, false),
                _ => (Output::Holevo, true),
            };
            figures::gain_sweep(output, alpha, &gains, with_pila, &policy)?
        }
        "fig2" | "fig7" | "fig9" => {
            let alpha = positive(params, "alpha_mod")?;
            let gain = pila_gain(params, "g")?;
            let ratios = linspace(0.0, 1.0, steps(params, "r_steps")?);
            let metrics: &[PhaseMetric] = match spec.name {
                "fig2" => &[PhaseMetric::Gain, PhaseMetric::MeanGain],
                "fig7" => &[PhaseMetric::Fidelity],
                _ => &[PhaseMetric::Holevo],
            };
            figures::ratio_sweep(metrics, alpha, gain, &ratios, phases(params)?, &policy)?
        }
        "fig3b" => {
            let alpha = positive(params, "alpha_mod")?;
            let (lo, hi) = range(params, "ge_min", "ge_max")?;
            require(lo >= 1.0, || format!("ge_min must be at least 1, got {lo}"))?;
            let bound = pila_gain(params, "g_bound")?;
            require(bound > 1.0, || "g_bound must exceed 1".into())?;
            let targets = linspace(lo, hi, steps(params, "ge_steps")?);
            figures::fidelity_at_effective_gain(alpha, &targets, (1.0, bound), &policy)?
        }
        "fig4" => {
            let cfg = ScissorComparison {
                alpha_mod: positive(params, "alpha_mod")?,
                max_arms: params.usize("n_max")?,
                target_gain: positive(params, "target_ge")?,
                transmittance: params.f64("transmittance")?,
                gain_bounds: (1.0, pila_gain(params, "g_bound")?),
                scissor_bounds: (1.0, positive(params, "scissor_bound")?),
            };
            require(cfg.max_arms >= 1, || "n_max must be at least 1".into())?;
            require(cfg.transmittance > 0.0 && cfg.transmittance < 1.0, || {
                format!("transmittance must lie in (0, 1), got {}", cfg.transmittance)
            })?;
            figures::scissor_comparison(&cfg, &policy)?
        }
        "wigner" => {
            let gain = pila_gain(params, "g")?;
            let alpha = positive(params, "alpha_mod")?;
            let grid = WignerGrid {
                x_min: params.f64("x_min")?,
                x_max: params.f64("x_max")?,
                p_min: params.f64("p_min")?,
                p_max: params.f64("p_max")?,
                step: positive(params, "step")?,
            };
            grid.validate()?;
            let scheme = wigner_scheme(params.str("op"), gain)?;
            let alpha = Complex64::from_polar(alpha, params.f64("phi")?);
            figures::wigner_table(scheme.as_ref(), alpha, &grid, &policy)?
        }
        "custom" => {
            let n_phases = params.usize("n_phases")?;
            let plan = SweepPlan {
                scheme: params.str("scheme").to_string(),
                params: SchemeParams {
                    gain: params.f64("g")?,
                    m: params
                        .usize("m")?
                        .try_into()
                        .map_err(|_| config_error("m is too large"))?,
                    ratio_r: params.f64("r")?,
                    transmittance: params.f64("transmittance")?,
                    detector: parse_detector(params.str("detector"))?,
                    ndpa_gain: params.f64("ndpa_gain")?,
                    arms: params.usize("arms")?,
                    scissor_gain: params.f64("scissor_gain")?,
                },
                alpha_mod: positive(params, "alpha_mod")?,
                phase: params.f64("phi")?,
                var: SweepVar::parse(params.str("sweep"))?,
                range: (params.f64("lo")?, params.f64("hi")?, steps(params, "steps")?),
                outputs: params
                    .str("outputs")
                    .split(',')
                    .map(|s| Output::parse(s.trim()))
                    .collect::<Result<_, _>>()?,
                n_phases: (n_phases > 0).then_some(n_phases),
            };
            run_sweep(&plan, &SchemeRegistry::with_builtins(), &policy)?
        }
        other => unreachable!("command {other} has no runner"),
    };
    Ok(table)
}
