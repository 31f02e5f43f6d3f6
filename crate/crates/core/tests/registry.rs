use noisy_amp::experiments::{calibrate_gain, run_sweep, Output, SweepPlan, SweepVar};
use noisy_amp::schemes::{Amplified, SchemeParams};
use noisy_amp::truncation::initial_dim;
use noisy_amp::{AmplifierScheme, Complex64 as C64, HilbertSpec, Ket, Result, SchemeRegistry, TruncationPolicy};

/// Deterministic noiseless amplifier `|α⟩ → |√G α⟩`; unphysical, handy as a yardstick.
#[derive(Debug)]
struct Ideal {
    gain: f64,
}

impl AmplifierScheme for Ideal {
    fn name(&self) -> String {
        "ideal".into()
    }

    fn start_dim(&self, mod_alpha: f64) -> usize {
        initial_dim(self.gain, mod_alpha, 0)
    }

    fn amplify(&self, alpha: C64, spec: HilbertSpec) -> Result<Amplified> {
        Ok(Amplified {
            state: Ket::coherent(alpha * self.gain.sqrt(), spec)?.projector(),
            success_probability: None,
            heralding_weight: None,
            deficit: 0.0,
        })
    }

    fn is_physical(&self) -> bool {
        false
    }

    fn pila_gain(&self) -> Option<f64> {
        None
    }

    fn tuning_parameter(&self) -> &'static str {
        "G"
    }

    fn tuning(&self) -> f64 {
        self.gain
    }

    fn retuned(&self, value: f64) -> Result<Box<dyn AmplifierScheme>> {
        Ok(Box::new(Ideal { gain: value }))
    }
}

fn registry() -> SchemeRegistry {
    let mut reg = SchemeRegistry::with_builtins();
    reg.register("ideal", |p| Ok(Box::new(Ideal { gain: p.gain })));
    reg
}

#[test]
fn custom_schemes_join_the_builtins() {
    let reg = registry();
    let names: Vec<&str> = reg.names().collect();
    for n in [
        "add", "bs-sub", "coherent", "ideal", "ndpa-add", "pila", "scissor", "sub",
    ] {
        assert!(names.contains(&n), "{n} missing from {names:?}");
    }
    assert!(reg.build("nope", &SchemeParams::default()).is_err());
}

#[test]
fn sweeps_dispatch_through_the_registry() {
    let plan = SweepPlan {
        scheme: "ideal".into(),
        params: SchemeParams::default(),
        alpha_mod: 0.5,
        phase: 0.3,
        var: SweepVar::Gain,
        range: (1.0, 3.0, 5),
        outputs: vec![Output::EffectiveGain, Output::Fidelity, Output::Holevo],
        n_phases: None,
    };
    let t = run_sweep(&plan, &registry(), &TruncationPolicy::default()).unwrap();
    assert_eq!(t.failed_rows(), 0);
    let (gs, ge, f) = (t.column("G").unwrap(), t.column("Ge").unwrap(), t.column("F").unwrap());
    for ((g, ge), f) in gs.iter().zip(&ge).zip(&f) {
        assert!((ge - g).abs() < 1e-9, "{ge} vs {g}");
        assert!((f - 1.0).abs() < 1e-9);
    }

    let ps = SweepPlan {
        outputs: vec![Output::SuccessProbability],
        ..plan
    };
    assert!(run_sweep(&ps, &registry(), &TruncationPolicy::default()).is_err());
}

#[test]
fn calibration_works_on_any_scheme() {
    let reg = registry();
    let ideal = reg.build("ideal", &SchemeParams::default()).unwrap();
    let c = calibrate_gain(
        ideal.as_ref(),
        C64::new(0.4, 0.0),
        2.5,
        (1.0, 4.0),
        &TruncationPolicy::default(),
    )
    .unwrap();
    assert!((c.value - 2.5).abs() < 1e-6);
    assert!((c.effective_gain - 2.5).abs() <= 1e-6);
}
